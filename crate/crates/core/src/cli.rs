//! The `pcgroup` command line. `run` parses argv, dispatches, prints text or
//! JSON and returns the exit code: 0 success, 1 domain failure (including a
//! failed `*-check`), 2 usage or parse error.

use std::io::{Read, Write};

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::formulas::{self, EncodingWitness, Formula, GroupCode};
use crate::fv::{self, FactorNames, FvOptions};
use crate::geneq::{self, GeneralisedEquation, PartitionTable, TableEnumConfig};
use crate::graph::CommutationGraph;
use crate::merzlyakov::{self, MerzlyakovParams, SkolemCandidate};
use crate::solver::{self, LiteralSystem};
use crate::structure;
use crate::system::EqSystem;
use crate::trace::{self, Word};
use crate::vankampen;

#[derive(Parser, Debug)]
#[command(name = "pcgroup", version, about = "Computations in partially commutative groups")]
struct Cli {
    /// Commutation graph: a file path, `-` for stdin, or inline text.
    #[arg(long, global = true)]
    graph: Option<String>,
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for randomised checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(clap::Args, Debug, Clone)]
struct WitnessArgs {
    /// Conjugation exponent N; defaults to 3·cdim+4.
    #[arg(long)]
    exponent: Option<usize>,
    /// First witness word; defaults to the computed domain witness.
    #[arg(long, requires = "b")]
    a: Option<String>,
    #[arg(long, requires = "a")]
    b: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Canonical form of a word.
    Normalize {
        #[arg(long)]
        word: String,
    },
    /// Word problem: are two words equal in the group?
    Eq {
        #[arg(long)]
        u: String,
        #[arg(long)]
        v: String,
    },
    Geodesic {
        #[arg(long)]
        word: String,
    },
    Blocks {
        #[arg(long)]
        word: String,
    },
    Root {
        #[arg(long)]
        word: String,
    },
    Cyclic {
        #[arg(long)]
        word: String,
    },
    Centralizer {
        #[arg(long)]
        word: String,
    },
    /// A conjugator t with t u t⁻¹ = v, or `none`.
    Conjugate {
        #[arg(long)]
        u: String,
        #[arg(long)]
        v: String,
    },
    /// Direct factors: connected components of the non-commutation graph.
    Decompose,
    Diameter,
    CdimBound,
    DomainCheck {
        #[command(flatten)]
        witness: WitnessArgs,
    },
    Axioms {
        #[arg(long, default_value_t = 1)]
        radius: usize,
        #[command(flatten)]
        witness: WitnessArgs,
    },
    /// One equation equivalent to a conjunction of equations.
    EncodeConj {
        #[arg(long)]
        formula: String,
        #[command(flatten)]
        witness: WitnessArgs,
    },
    /// One equation equivalent to a disjunction of equations.
    EncodeDisj {
        #[arg(long)]
        formula: String,
        #[command(flatten)]
        witness: WitnessArgs,
    },
    QfNormalize {
        #[arg(long)]
        formula: String,
        /// Prenex positive form instead of the quantifier-free normal form.
        #[arg(long)]
        prenex: bool,
        #[command(flatten)]
        witness: WitnessArgs,
    },
    TranslateCode {
        #[arg(long)]
        formula: String,
        /// identity | center-quotient | subgroup
        #[arg(long)]
        code: String,
        /// Universe formula in the free variable `x` for `--code subgroup`.
        #[arg(long)]
        universe: Option<String>,
    },
    /// Stream the partition tables of a system, one JSON object per line.
    GeEnum {
        #[arg(long)]
        system: String,
        #[arg(long)]
        limit: Option<usize>,
        #[arg(long, default_value_t = 6)]
        max_z: usize,
        #[arg(long)]
        max_graphs: Option<usize>,
    },
    GeBuild {
        #[arg(long)]
        system: String,
        /// Partition table JSON (file, `-` or inline).
        #[arg(long)]
        table: String,
    },
    GeCheck {
        #[arg(long)]
        system: String,
        #[arg(long, conflicts_with = "ge", required_unless_present = "ge")]
        table: Option<String>,
        #[arg(long)]
        ge: Option<String>,
        /// Items h_1, …, h_ρ separated by commas.
        #[arg(long)]
        solution: String,
        /// Extra isolated generators the solution may use.
        #[arg(long)]
        vars: Option<String>,
    },
    GeInduce {
        #[arg(long)]
        system: String,
        /// One value per variable, separated by commas.
        #[arg(long)]
        solution: String,
    },
    CancelScheme {
        /// Geodesic factors separated by commas.
        #[arg(long)]
        words: String,
        /// The geodesic product v; each factor then carries a remainder v_l.
        #[arg(long)]
        rem: Option<String>,
    },
    MerzlyakovGen {
        #[arg(long)]
        system: String,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        n_bound: Option<usize>,
        #[arg(long, default_value_t = 1)]
        count: usize,
    },
    SkolemCheck {
        #[arg(long)]
        system: String,
        #[arg(long)]
        q: String,
    },
    LiftCheck {
        #[arg(long)]
        formula: String,
        #[arg(long)]
        q: String,
    },
    FvSplit {
        #[arg(long)]
        formula: String,
        #[arg(long)]
        positive: bool,
        #[arg(long)]
        literal: bool,
        #[arg(long)]
        g1: Option<String>,
        #[arg(long)]
        g2: Option<String>,
        #[arg(long, default_value_t = 12)]
        max_index: usize,
    },
    FvCheck {
        #[arg(long)]
        formula: String,
        #[arg(long)]
        g1: String,
        #[arg(long)]
        g2: String,
        #[arg(long, default_value_t = 1)]
        radius: usize,
        #[arg(long)]
        positive: bool,
        #[arg(long)]
        literal: bool,
        #[arg(long, default_value_t = 12)]
        max_index: usize,
        /// Check this many seeded random assignments instead of all.
        #[arg(long)]
        sample: Option<usize>,
    },
    Solve {
        #[arg(long)]
        system: String,
        #[arg(long, default_value_t = 1)]
        radius: usize,
        #[arg(long, default_value_t = solver::DEFAULT_MAX_CHECKS)]
        max_checks: u64,
    },
    /// Specialise the variables of G[X] so that the word stays nontrivial.
    Separate {
        #[arg(long)]
        word: String,
        /// Variable generator names, space separated.
        #[arg(long)]
        vars: String,
        #[arg(long, default_value_t = 2)]
        radius: usize,
    },
}

struct Output {
    text: String,
    json: Value,
    ok: bool,
}

impl Output {
    fn new(text: impl Into<String>, json: Value) -> Self {
        Output { text: text.into(), json, ok: true }
    }

    fn check(ok: bool, text: impl Into<String>, json: Value) -> Self {
        Output { text: text.into(), json, ok }
    }
}

/// `-` reads stdin, an existing path is read, anything else is the text itself.
fn load_text(arg: &str) -> Result<String> {
    if arg == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        return Ok(s);
    }
    let p = std::path::Path::new(arg);
    if p.is_file() {
        return Ok(std::fs::read_to_string(p)?);
    }
    Ok(arg.to_string())
}

fn load_graph(arg: Option<&str>) -> Result<CommutationGraph> {
    let arg = arg.ok_or_else(|| Error::invalid("--graph is required"))?;
    CommutationGraph::parse(&load_text(arg)?)
}

fn load_json(arg: &str) -> Result<Value> {
    serde_json::from_str(&load_text(arg)?).map_err(|e| Error::parse(e.column(), format!("JSON: {e}")))
}

fn words(g: &CommutationGraph, list: &str) -> Result<Vec<Word>> {
    list.split(',').map(|w| trace::parse_word(g, w.trim())).collect()
}

fn fmt(g: &CommutationGraph, w: &Word) -> String {
    trace::format_word(g, w)
}

fn witness(g: &CommutationGraph, args: &WitnessArgs) -> Result<(EncodingWitness, Value)> {
    let (a, b, default_n) = match (&args.a, &args.b) {
        (Some(a), Some(b)) => {
            let (a, b) = (trace::parse_word(g, a)?, trace::parse_word(g, b)?);
            structure::check_witness_pair(g, &a, &b)?;
            (a, b, structure::default_exponent(g))
        }
        _ => {
            let d = structure::domain_witnesses(g)?;
            (d.a, d.b, d.exponent)
        }
    };
    let n = args.exponent.unwrap_or(default_n);
    let j = json!({"a": fmt(g, &a), "b": fmt(g, &b), "exponent": n});
    Ok((EncodingWitness::from_words(g, &a, &b, n as i64), j))
}

fn atoms(phi: Formula, conj: bool) -> Vec<Formula> {
    match (phi, conj) {
        (Formula::And(fs), true) | (Formula::Or(fs), false) => fs,
        (f, _) => vec![f],
    }
}

fn system(g: &CommutationGraph, arg: &str) -> Result<EqSystem> {
    EqSystem::parse(g, &load_text(arg)?)
}

fn formula(arg: &str) -> Result<Formula> {
    formulas::parse_formula(&load_text(arg)?)
}

fn dispatch(cli: &Cli) -> Result<Output> {
    let graph = || load_graph(cli.graph.as_deref());
    Ok(match &cli.cmd {
        Cmd::Normalize { word } => {
            let g = graph()?;
            let n = fmt(&g, &trace::normalize(&g, &trace::parse_word(&g, word)?));
            Output::new(&n, json!({"normal_form": n}))
        }
        Cmd::Eq { u, v } => {
            let g = graph()?;
            let r = trace::equals(&g, &trace::parse_word(&g, u)?, &trace::parse_word(&g, v)?);
            Output::new(r.to_string(), json!({"equal": r}))
        }
        Cmd::Geodesic { word } => {
            let g = graph()?;
            let r = trace::is_geodesic(&g, &trace::parse_word(&g, word)?);
            Output::new(r.to_string(), json!({"geodesic": r}))
        }
        Cmd::Blocks { word } => {
            let g = graph()?;
            let bs: Vec<String> = trace::block_decomposition(&g, &trace::parse_word(&g, word)?).iter().map(|b| fmt(&g, b)).collect();
            Output::new(bs.join("\n"), json!({"blocks": bs}))
        }
        Cmd::Root { word } => {
            let g = graph()?;
            let (r, k) = trace::root(&g, &trace::parse_word(&g, word)?)?;
            let r = fmt(&g, &r);
            Output::new(format!("root: {r}\nexponent: {k}"), json!({"root": r, "exponent": k}))
        }
        Cmd::Cyclic { word } => {
            let g = graph()?;
            let d = trace::cyclic_reduce(&g, &trace::parse_word(&g, word)?);
            let (c, k) = (fmt(&g, &d.conjugator), fmt(&g, &d.core));
            Output::new(format!("conjugator: {c}\ncore: {k}"), json!({"conjugator": c, "core": k}))
        }
        Cmd::Centralizer { word } => {
            let g = graph()?;
            let c = structure::centraliser(&g, &trace::parse_word(&g, word)?)?;
            let gens: Vec<String> = c.generators(&g).iter().map(|w| fmt(&g, w)).collect();
            let text = format!("generators: {}\ncyclic: {}", gens.join(", "), c.is_cyclic());
            Output::new(text, c.to_json(&g))
        }
        Cmd::Conjugate { u, v } => {
            let g = graph()?;
            match structure::conjugate(&g, &trace::parse_word(&g, u)?, &trace::parse_word(&g, v)?)? {
                Some(t) => {
                    let t = fmt(&g, &t);
                    Output::new(&t, json!({"conjugate": true, "conjugator": t}))
                }
                None => Output::new("none", json!({"conjugate": false, "conjugator": null})),
            }
        }
        Cmd::Decompose => {
            let g = graph()?;
            let comps: Vec<Vec<String>> =
                g.delta_components().iter().map(|c| c.iter().map(|&i| g.name(i).to_string()).collect()).collect();
            let text = comps.iter().map(|c| c.join(" ")).collect::<Vec<_>>().join("\n");
            Output::new(text, json!({"components": comps}))
        }
        Cmd::Diameter => {
            let g = graph()?;
            match g.diameter_delta() {
                Some(d) => Output::new(d.to_string(), json!({"diameter": d})),
                None => Output::new("disconnected", json!({"diameter": null})),
            }
        }
        Cmd::CdimBound => {
            let g = graph()?;
            let c = g.cdim_estimate();
            let text = format!("lower: {}\nlattice_height: {}\nchosen: {}", c.lower, c.lattice_height, c.chosen);
            Output::new(text, serde_json::to_value(&c).expect("serializable"))
        }
        Cmd::DomainCheck { witness: w } => {
            let g = graph()?;
            match structure::domain_witnesses(&g) {
                Ok(mut d) => {
                    if let (Some(a), Some(b)) = (&w.a, &w.b) {
                        d.a = trace::parse_word(&g, a)?;
                        d.b = trace::parse_word(&g, b)?;
                        structure::check_witness_pair(&g, &d.a, &d.b)?;
                    }
                    if let Some(n) = w.exponent {
                        d.exponent = n;
                    }
                    let text = format!("domain: true\na: {}\nb: {}\nexponent: {}", fmt(&g, &d.a), fmt(&g, &d.b), d.exponent);
                    let mut j = d.to_json(&g);
                    j["domain"] = json!(true);
                    Output::new(text, j)
                }
                Err(Error::Domain(msg)) => Output::check(false, format!("domain: false\nreason: {msg}"), json!({"domain": false, "reason": msg})),
                Err(e) => return Err(e),
            }
        }
        Cmd::Axioms { radius, witness: w } => {
            let g = graph()?;
            let (a, b) = match (&w.a, &w.b) {
                (Some(a), Some(b)) => (trace::parse_word(&g, a)?, trace::parse_word(&g, b)?),
                _ => {
                    let d = structure::domain_witnesses(&g)?;
                    (d.a, d.b)
                }
            };
            let r = formulas::check_axioms(&g, *radius, &a, &b);
            let mut text = format!("witness a: {}\nwitness b: {}\n", r.witness_a, r.witness_b);
            for x in &r.results {
                text.push_str(&format!("{}: {}\n", x.name, if x.holds { "holds" } else { "fails" }));
                if let Some(c) = &x.counterexample {
                    text.push_str(&format!("  counterexample: {}\n", c.join(", ")));
                }
            }
            Output::check(r.all_hold(), text.trim_end(), serde_json::to_value(&r).expect("serializable"))
        }
        Cmd::EncodeConj { formula: f, witness: w } => {
            let g = graph()?;
            let (wit, wj) = witness(&g, w)?;
            let e = formulas::encode_conj(&atoms(formula(f)?, true), &wit.a, &wit.b)?;
            Output::new(e.to_string(), json!({"formula": e.to_string(), "witness": wj}))
        }
        Cmd::EncodeDisj { formula: f, witness: w } => {
            let g = graph()?;
            let (wit, wj) = witness(&g, w)?;
            let e = formulas::encode_disj(&atoms(formula(f)?, false), &wit)?;
            Output::new(e.to_string(), json!({"formula": e.to_string(), "witness": wj}))
        }
        Cmd::QfNormalize { formula: f, prenex, witness: w } => {
            let g = graph()?;
            let (wit, wj) = witness(&g, w)?;
            let phi = formula(f)?;
            let e = if *prenex { formulas::prenex_positive(&phi, &wit)? } else { formulas::qf_normal_form(&phi, &wit)?.to_formula() };
            Output::new(e.to_string(), json!({"formula": e.to_string(), "witness": wj}))
        }
        Cmd::TranslateCode { formula: f, code, universe } => {
            let code = match code.as_str() {
                "identity" => GroupCode::identity(),
                "center-quotient" => GroupCode::center_quotient(),
                "subgroup" => {
                    let u = universe.as_deref().ok_or_else(|| Error::invalid("--code subgroup needs --universe"))?;
                    let u = formula(u)?;
                    let params: Vec<String> = u.free_vars().into_iter().filter(|v| v != "x").collect();
                    GroupCode::subgroup(u, params)
                }
                other => return Err(Error::invalid(format!("unknown code `{other}`"))),
            };
            let e = formulas::translate_code(&code, &formula(f)?)?;
            Output::new(e.to_string(), json!({"formula": e.to_string()}))
        }
        Cmd::GeEnum { system: s, limit, max_z, max_graphs } => {
            let g = graph()?;
            let sys = system(&g, s)?;
            let cfg = TableEnumConfig { limit: *limit, max_z: *max_z, max_graphs_per_shape: *max_graphs };
            let mut tables = Vec::new();
            let report = geneq::partition_tables(&g, &sys, &cfg, &mut |t: PartitionTable| {
                tables.push(t.to_json());
                true
            })?;
            let text = tables.iter().map(|t| t.to_string()).collect::<Vec<_>>().join("\n");
            Output::new(text, json!({"tables": tables, "report": report}))
        }
        Cmd::GeBuild { system: s, table } => {
            let g = graph()?;
            let sys = system(&g, s)?;
            let t = PartitionTable::from_json(&g, &load_json(table)?)?;
            let ge = geneq::build_ge(&g, &sys, &t)?;
            let j = ge.to_json(&g);
            Output::new(serde_json::to_string_pretty(&j).expect("serializable"), j)
        }
        Cmd::GeCheck { system: s, table, ge, solution, vars } => {
            let g = graph()?;
            let sys = system(&g, s)?;
            let ge = match (table, ge) {
                (Some(t), _) => geneq::build_ge(&g, &sys, &PartitionTable::from_json(&g, &load_json(t)?)?)?,
                (None, Some(e)) => GeneralisedEquation::from_json(&g, &load_json(e)?)?,
                (None, None) => return Err(Error::invalid("--table or --ge is required")),
            };
            let amb = match vars {
                Some(v) => g.extend(&v.split_whitespace().map(String::from).collect::<Vec<_>>(), &[])?,
                None => g.clone(),
            };
            let u = words(&amb, solution)?;
            let ok = ge.check_solution(&amb, &u)?;
            let mut j = json!({"solution": ok});
            let mut text = ok.to_string();
            if ok {
                let lifted = geneq::lift_solution(&ge, &sys, &amb, &u)?;
                let vals: Vec<String> = lifted.iter().map(|w| fmt(&amb, w)).collect();
                for (x, v) in sys.vars.iter().zip(&vals) {
                    text.push_str(&format!("\n?{x} = {v}"));
                }
                j["values"] = json!(vals);
                j["p_map"] = json!(ge.format_p_map());
            }
            Output::check(ok, text, j)
        }
        Cmd::GeInduce { system: s, solution } => {
            let g = graph()?;
            let sys = system(&g, s)?;
            let w = words(&g, solution)?;
            if w.len() != sys.vars.len() {
                return Err(Error::invalid(format!("expected {} values, got {}", sys.vars.len(), w.len())));
            }
            let ind = geneq::induced_table(&g, &sys, &w)?;
            let j = ind.to_json(&g);
            Output::new(serde_json::to_string_pretty(&j).expect("serializable"), j)
        }
        Cmd::CancelScheme { words: ws, rem } => {
            let g = graph()?;
            let ws = words(&g, ws)?;
            let scheme = match rem {
                Some(r) => vankampen::product_scheme_rem(&g, &ws, &trace::parse_word(&g, r)?)?,
                None => vankampen::product_scheme(&g, &ws)?,
            };
            let j = scheme.to_json(&g);
            Output::new(j.to_string(), j)
        }
        Cmd::MerzlyakovGen { system: s, m, n_bound, count } => {
            let g = graph()?;
            let sys = system(&g, s)?;
            let d = MerzlyakovParams::defaults(&sys, *count);
            let params = MerzlyakovParams::with(m.unwrap_or(d.m), n_bound.unwrap_or(d.n_bound), *count);
            let (a, b) = merzlyakov::base_elements(&g)?;
            let mut gs = Vec::new();
            for i in 1..=*count {
                let w = merzlyakov::merzlyakov_word(&g, i, &params, &gs)?;
                gs.push(w);
            }
            let gs: Vec<String> = gs.iter().map(|w| fmt(&g, w)).collect();
            let mut text = format!("m: {}\nn_bound: {}\na_word: {}\nb_word: {}", params.m, params.n_bound, fmt(&g, &a), fmt(&g, &b));
            for (i, w) in gs.iter().enumerate() {
                text.push_str(&format!("\ng{}: {w}", i + 1));
            }
            Output::new(
                text,
                json!({"m": params.m, "n_bound": params.n_bound, "a_word": fmt(&g, &a), "b_word": fmt(&g, &b), "g": gs}),
            )
        }
        Cmd::SkolemCheck { system: s, q } => {
            let g = graph()?;
            let sys = system(&g, s)?;
            let (cand, _) = SkolemCandidate::parse(&g, &load_text(q)?)?;
            let ok = merzlyakov::skolem_check(&g, &sys, &cand)?;
            Output::check(ok, ok.to_string(), json!({"holds": ok}))
        }
        Cmd::LiftCheck { formula: f, q } => {
            let g = graph()?;
            let (cand, _) = SkolemCandidate::parse(&g, &load_text(q)?)?;
            let ok = merzlyakov::lift_check(&g, &formula(f)?, &cand)?;
            Output::check(ok, ok.to_string(), json!({"holds": ok}))
        }
        Cmd::FvSplit { formula: f, positive, literal, g1, g2, max_index } => {
            let names = match (g1, g2) {
                (Some(a), Some(b)) => FactorNames::from_graphs(&load_graph(Some(a))?, &load_graph(Some(b))?),
                (None, None) => FactorNames::default(),
                _ => return Err(Error::invalid("give both --g1 and --g2 or neither")),
            };
            let opts = FvOptions { max_index: *max_index, literal: *literal };
            let phi = formula(f)?;
            let fam = if *positive { fv::fv_split_positive(&phi, &names, opts)? } else { fv::fv_split(&phi, &names, opts)? };
            let text = fam.pairs.iter().map(|(l, r)| format!("{l} | {r}")).collect::<Vec<_>>().join("\n");
            Output::new(text, fam.to_json())
        }
        Cmd::FvCheck { formula: f, g1, g2, radius, positive, literal, max_index, sample } => {
            let (a, b) = (load_graph(Some(g1))?, load_graph(Some(g2))?);
            let names = FactorNames::from_graphs(&a, &b);
            let opts = FvOptions { max_index: *max_index, literal: *literal };
            let phi = formula(f)?;
            let fam = if *positive { fv::fv_split_positive(&phi, &names, opts)? } else { fv::fv_split(&phi, &names, opts)? };
            let (s1, s2) = (formulas::BallStructure::ball(&a, *radius), formulas::BallStructure::ball(&b, *radius));
            let r = match sample {
                Some(k) => fv::check_family_sampled(&phi, &fam, &s1, &s2, *k, cli.seed)?,
                None => fv::check_family(&phi, &fam, &s1, &s2)?,
            };
            let mut text = format!("equivalent: {}\nfamily_size: {}\nassignments: {}", r.holds, r.family_size, r.assignments);
            if sample.is_some() {
                text.push_str(&format!("\nseed: {}", cli.seed));
            }
            if let Some(c) = &r.counterexample {
                for (v, l, rr) in c {
                    text.push_str(&format!("\n{v} = ({l}, {rr})"));
                }
            }
            let mut j = serde_json::to_value(&r).expect("serializable");
            if sample.is_some() {
                j["seed"] = json!(cli.seed);
            }
            Output::check(r.holds, text, j)
        }
        Cmd::Solve { system: s, radius, max_checks } => {
            let g = graph()?;
            let sys = system(&g, s)?;
            let v = solver::solve_bounded(&g, &LiteralSystem::from_system(&g, &sys), *radius, *max_checks)?;
            let j = v.to_json(&g);
            Output::new(j.to_string(), j)
        }
        Cmd::Separate { word, vars, radius } => {
            let g = graph()?;
            let names: Vec<String> = vars.split_whitespace().map(String::from).collect();
            let gx = g.extend(&names, &[])?;
            let w = trace::parse_word(&gx, word)?;
            let s = structure::separate_in_gx(&gx, &g, &w, *radius)?;
            let mut text: Vec<String> = s.assignment.iter().map(|(x, v)| format!("{x} -> {v}")).collect();
            text.push(format!("image: {}", s.image));
            text.push(format!("method: {}", s.method));
            Output::new(text.join("\n"), serde_json::to_value(&s).expect("serializable"))
        }
    })
}

/// Runs one invocation; `out` receives results, `err` diagnostics.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    match dispatch(&cli) {
        Ok(o) => {
            let body = if cli.json { o.json.to_string() } else { o.text };
            if !body.is_empty() {
                let _ = writeln!(out, "{body}");
            }
            if o.ok {
                0
            } else {
                1
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

//! `nkoszul`: duals, functors, contractions, membership checks and property suites
//! from JSON input documents. Exit status 0 on success, 1 when a verification fails,
//! 2 on bad input.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use nkoszul::algebra::{compute_orthogonal, compute_orthogonal_via_ordering, GradedAlgebra};
use nkoszul::complexes::{
    conditions_y, contract_g, contract_h, in_g_star, in_t_star, in_y, in_yo, nu, psi, ComplexOfGraded,
};
use nkoszul::grmod::{
    in_g, in_l, in_l_e, in_lo, is_torsionfree, presented_in_degrees, torsion_submodule, GradedModule, TorsionParams,
};
use nkoszul::io::{complex_from_doc, complex_to_doc, module_from_doc, module_to_doc, Algebras, InputDocument};
use nkoszul::koszul::is_n_koszul;
use nkoszul::linalg::Subspace;
use nkoszul::quiver::{PathElement, PathTable};
use nkoszul::suites::{annihilates_orthogonal, run_suite, Corpus, SuiteOptions, SUITES};
use nkoszul::Error;

#[derive(Parser)]
#[command(name = "nkoszul", version, about = "Exact computations with n-homogeneous duals and linear n-complexes")]
struct Cli {
    /// Prime modulus of the base field (default: the document's, else 101).
    #[arg(long, global = true)]
    modulus: Option<u32>,
    /// Degree window: algebras are computed through HI; module inputs must start at or above LO.
    #[arg(long, global = true, num_args = 2, value_names = ["LO", "HI"], allow_negative_numbers = true)]
    window: Option<Vec<i64>>,
    /// Torsion parameter m (default 0).
    #[arg(long, global = true, allow_negative_numbers = true)]
    m: Option<i64>,
    /// Torsion parameter r (default 1; other values only for torsion predicates).
    #[arg(long, global = true)]
    r: Option<usize>,
    #[arg(long, global = true, default_value_t = 50)]
    trials: usize,
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    /// Write the JSON report here instead of standard output.
    #[arg(long, global = true)]
    report: Option<PathBuf>,
    /// Proceed with functors that need D(Λ) when Λ is not finite within the window.
    #[arg(long, global = true)]
    allow_windowed_dual: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// The orthogonal of the relations by both algorithms, and dimension tables.
    Dual { input: PathBuf },
    /// Ψ or ν of a named module, with the complex condition and its oracle.
    Functor {
        input: PathBuf,
        #[arg(long, value_enum)]
        which: Which,
        #[arg(long)]
        module: String,
    },
    /// Contracts a named n-complex to a 2-complex.
    Contract {
        input: PathBuf,
        #[arg(long)]
        complex: String,
        #[arg(long, value_enum, default_value = "h")]
        direction: Direction,
    },
    /// Evaluates a membership predicate on a named module or complex.
    Check {
        input: PathBuf,
        #[arg(long)]
        predicate: String,
        /// A module or complex name, or `lambda` for algebra predicates.
        #[arg(long)]
        object: String,
        /// Homological bound for `n_koszul`.
        #[arg(long, default_value_t = 4)]
        bound: usize,
    },
    /// Runs a seeded property suite.
    Verify {
        /// Draw the oracle suites' modules over this presentation.
        input: Option<PathBuf>,
        #[arg(long)]
        suite: String,
        #[arg(long, hide = true)]
        mutate: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Which {
    Psi,
    Nu,
}

#[derive(Clone, Copy, ValueEnum)]
enum Direction {
    H,
    G,
}

const MODULE_PREDICATES: [&str; 7] = ["in_G", "in_L", "in_L_E", "in_Lo", "torsionfree", "in_T_S", "presented_even"];
const COMPLEX_PREDICATES: [&str; 5] = ["is_n_complex", "in_T_star", "in_G_star", "in_Y", "in_Yo"];

enum Failure {
    Input(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Input(e.to_string())
    }
}

type Outcome = std::result::Result<(Value, bool), Failure>;

struct Session {
    doc: InputDocument,
    algebras: Algebras,
    params_m: i64,
    params_r: usize,
    lo: Option<i64>,
}

fn load(cli: &Cli, path: &Path) -> std::result::Result<Session, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    let doc = InputDocument::from_json(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    let field = doc.field(cli.modulus)?;
    let (lo, hi) = match cli.window.as_deref() {
        Some(&[lo, hi]) => {
            if lo > 0 || hi < doc.n as i64 {
                return Err(Failure::Input(format!("window [{lo}, {hi}] must contain 0 and n = {}", doc.n)));
            }
            (Some(lo), Some(hi as usize))
        }
        _ => (None, None),
    };
    let bundle = doc.bundle(field, hi)?;
    let params_m = cli.m.or(doc.m).unwrap_or(0);
    let params_r = cli.r.or(doc.r).unwrap_or(1);
    Ok(Session { algebras: Algebras::new(bundle), doc, params_m, params_r, lo })
}

impl Session {
    fn params(&self, torsion_only: bool) -> std::result::Result<TorsionParams, Failure> {
        if self.params_r != 1 && !torsion_only {
            return Err(Failure::Input("r other than 1 is only accepted by torsion predicates".into()));
        }
        Ok(TorsionParams::new(self.doc.n, self.params_r, self.params_m)?)
    }

    fn module(&self, name: &str) -> std::result::Result<GradedModule, Failure> {
        let md = self.doc.modules.get(name).ok_or_else(|| Failure::Input(format!("no module named '{name}'")))?;
        let alg = self.algebras.resolve(&md.over)?;
        let m = module_from_doc(md, alg, &format!("modules.{name}"))?;
        if let Some(lo) = self.lo {
            if !m.is_zero() && m.lo() < lo {
                return Err(Failure::Input(format!("module '{name}' starts in degree {} below the window", m.lo())));
            }
        }
        Ok(m)
    }

    fn complex(&self, name: &str) -> std::result::Result<ComplexOfGraded, Failure> {
        let cd = self.doc.complexes.get(name).ok_or_else(|| Failure::Input(format!("no complex named '{name}'")))?;
        Ok(complex_from_doc(cd, &self.algebras, &format!("complexes.{name}"))?)
    }
}

/// Own degrees whose underlying path degree lies inside the computed window.
fn computed_degrees(alg: &GradedAlgebra) -> impl Iterator<Item = usize> + '_ {
    let top = alg.base().top();
    (0..).take_while(move |&d| alg.base_degree(d).is_none_or(|b| b <= top))
}

fn vertex_pair_table(alg: &GradedAlgebra) -> Vec<Vec<Vec<usize>>> {
    let nv = alg.vertex_count();
    computed_degrees(alg)
        .map(|d| {
            let mut t = vec![vec![0; nv]; nv];
            for (s, e) in alg.basis_endpoints(d) {
                t[s][e] += 1;
            }
            t
        })
        .collect()
}

fn cmd_dual(s: &Session) -> Outcome {
    let b = &s.algebras.bundle;
    let n = b.n();
    let q_op = b.dual_pres.quiver();
    let table = PathTable::new(q_op, n);
    let pairing = compute_orthogonal(&b.lambda_slices);
    let data = compute_orthogonal_via_ordering(&b.lambda_slices)?;
    let span = Subspace::from_vectors(
        b.field(),
        table.len(),
        &data.h_basis.iter().map(|h| h.to_vector(&table)).collect::<Vec<_>>(),
    );
    let agree = span == pairing && data.h_basis.len() == pairing.dim();
    let fmt = |v: &Vec<u32>| PathElement::from_vector(n, &table, v).format(q_op);
    let report = json!({
        "orthogonal": {
            "pairing_kernel": pairing.basis_vectors().iter().map(fmt).collect::<Vec<_>>(),
            "dual_basis": data.h_basis.iter().map(|h| h.format(q_op)).collect::<Vec<_>>(),
            "agree": agree,
        },
        "dims": {
            "lambda": b.lambda_slices.dims(),
            "dual": b.dual_slices.dims(),
            "u": computed_degrees(&b.u).map(|d| b.u.dim(d)).collect::<Vec<_>>(),
            "e": computed_degrees(&b.e).map(|d| b.e.dim(d)).collect::<Vec<_>>(),
        },
        "dims_by_vertex_pair": {
            "lambda": vertex_pair_table(&b.lambda),
            "dual": vertex_pair_table(&b.dual),
            "u": vertex_pair_table(&b.u),
            "e": vertex_pair_table(&b.e),
        },
        "lambda_finite": b.lambda_slices.top_nonzero_degree().is_some(),
    });
    Ok((report, agree))
}

fn cmd_functor(s: &Session, cli: &Cli, which: Which, name: &str) -> Outcome {
    s.params(false)?;
    let b = &s.algebras.bundle;
    let m = s.module(name)?;
    let c = match which {
        Which::Psi => psi(&m, &b.lambda, cli.allow_windowed_dual)?,
        Which::Nu => nu(&m, &b.lambda, cli.allow_windowed_dual)?,
    };
    let complex = c.is_n_complex(b.n());
    let oracle = annihilates_orthogonal(b, &m)?;
    let report = json!({
        "functor": match which { Which::Psi => "psi", Which::Nu => "nu" },
        "module": name,
        "complex": complex_to_doc(&c, "lambda"),
        "is_n_complex": complex,
        "annihilates_orthogonal": oracle,
        "agree": complex == oracle,
    });
    Ok((report, complex == oracle))
}

fn cmd_contract(s: &Session, name: &str, direction: Direction) -> Outcome {
    let params = s.params(false)?;
    let c = s.complex(name)?;
    let n = s.doc.n;
    if c.period() != n || !c.is_n_complex(n) {
        return Err(Failure::Input(format!("complex '{name}' is not an {n}-complex")));
    }
    let out = match direction {
        Direction::H => contract_h(&c, s.params_m),
        Direction::G => contract_g(&c, s.params_m),
    };
    let two = out.is_n_complex(2);
    let t_star = in_t_star(&c, &params);
    let zero = out.trimmed().is_zero();
    let mut report = json!({
        "complex": name,
        "direction": match direction { Direction::H => "h", Direction::G => "g" },
        "m": s.params_m,
        "contracted": complex_to_doc(&out, "lambda"),
        "is_2_complex": two,
        "in_T_star": t_star,
        "contraction_is_zero": zero,
    });
    let mut ok = two;
    if let Direction::H = direction {
        report["kernel_is_t_star"] = json!(zero == t_star);
        ok &= zero == t_star;
    }
    Ok((report, ok))
}

fn check_module(s: &Session, predicate: &str, m: &GradedModule) -> std::result::Result<(bool, Value), Failure> {
    let torsion = matches!(predicate, "in_G" | "torsionfree" | "in_T_S");
    let params = s.params(torsion)?;
    Ok(match predicate {
        "in_G" => (in_g(m, &params), Value::Null),
        "in_L" => (in_l(m, &params)?, Value::Null),
        "in_L_E" => (in_l_e(m)?, Value::Null),
        "in_Lo" => (in_lo(m, &params)?, Value::Null),
        "torsionfree" => {
            let t = torsion_submodule(m, &params);
            let dims: BTreeMap<String, usize> =
                m.degrees().zip(&t).filter(|(_, s)| s.dim() > 0).map(|(d, s)| (d.to_string(), s.dim())).collect();
            (is_torsionfree(m, &params), json!({ "torsion_submodule_dims": dims }))
        }
        "in_T_S" => {
            let hits: Vec<i64> = m.support().into_iter().filter(|&d| params.in_s(d)).collect();
            (hits.is_empty(), json!({ "support_in_S": hits }))
        }
        "presented_even" => (presented_in_degrees(m, |d| d.rem_euclid(2) == 0)?, Value::Null),
        _ => unreachable!(),
    })
}

fn check_complex(s: &Session, predicate: &str, c: &ComplexOfGraded) -> std::result::Result<(bool, Value), Failure> {
    let params = s.params(false)?;
    let b = &s.algebras.bundle;
    Ok(match predicate {
        "is_n_complex" => (c.is_n_complex(b.n()), Value::Null),
        "in_T_star" => (in_t_star(c, &params), Value::Null),
        "in_G_star" => (in_g_star(c, &params)?, Value::Null),
        "in_Y" => {
            let (ok, x) = in_y(c, &params, &b.u)?;
            let witness = match x {
                Some(x) => json!({ "extracted_module": module_to_doc(&x, "u") }),
                None => json!({ "violation": conditions_y(c, &params)? }),
            };
            (ok, witness)
        }
        "in_Yo" => (in_yo(c, &params, s.algebras.opposite()?)?, Value::Null),
        _ => unreachable!(),
    })
}

fn cmd_check(s: &Session, predicate: &str, object: &str, bound: usize) -> Outcome {
    let (verdict, witness) = if predicate == "n_koszul" {
        if object != "lambda" {
            return Err(Failure::Input("n_koszul applies to the object 'lambda'".into()));
        }
        (is_n_koszul(&s.algebras.bundle.lambda, bound)?, json!({ "bound": bound }))
    } else if MODULE_PREDICATES.contains(&predicate) {
        check_module(s, predicate, &s.module(object)?)?
    } else if COMPLEX_PREDICATES.contains(&predicate) {
        check_complex(s, predicate, &s.complex(object)?)?
    } else {
        let known: Vec<&str> =
            MODULE_PREDICATES.iter().chain(&COMPLEX_PREDICATES).copied().chain(["n_koszul"]).collect();
        return Err(Failure::Input(format!("unknown predicate '{predicate}' (known: {})", known.join(", "))));
    };
    let report = json!({
        "predicate": predicate,
        "object": object,
        "params": { "n": s.doc.n, "m": s.params_m, "r": s.params_r },
        "verdict": verdict,
        "witness": witness,
    });
    Ok((report, true))
}

fn cmd_verify(cli: &Cli, input: Option<&Path>, suite: &str, mutate: bool) -> Outcome {
    if !SUITES.contains(&suite) {
        return Err(Failure::Input(format!("unknown suite '{suite}' (known: {})", SUITES.join(", "))));
    }
    let corpus = match input {
        None => Corpus::default(),
        Some(_) if !matches!(suite, "prop21" | "prop22") => {
            return Err(Failure::Input(format!("suite '{suite}' runs on the built-in corpus and takes no input")));
        }
        Some(path) => Corpus::with_oracle_algebra(load(cli, path)?.algebras.bundle),
    };
    let opts = SuiteOptions { trials: cli.trials, seed: cli.seed, mutate };
    let r = run_suite(suite, &opts, &corpus)?;
    let ok = r.ok();
    Ok((serde_json::to_value(&r).expect("serializable"), ok))
}

fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Dual { input } => cmd_dual(&load(cli, input)?),
        Command::Functor { input, which, module } => cmd_functor(&load(cli, input)?, cli, *which, module),
        Command::Contract { input, complex, direction } => cmd_contract(&load(cli, input)?, complex, *direction),
        Command::Check { input, predicate, object, bound } => cmd_check(&load(cli, input)?, predicate, object, *bound),
        Command::Verify { input, suite, mutate } => cmd_verify(cli, input.as_deref(), suite, *mutate),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let argv: Vec<String> = std::env::args().skip(1).collect();
    let (mut report, ok) = match run(&cli) {
        Ok(r) => r,
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    report["command"] = json!(argv);
    report["seed"] = if matches!(cli.command, Command::Verify { .. }) { json!(cli.seed) } else { Value::Null };
    report["success"] = json!(ok);
    let text = serde_json::to_string_pretty(&report).expect("serializable") + "\n";
    match &cli.report {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &text) {
                eprintln!("error: {}: {e}", path.display());
                return ExitCode::from(2);
            }
            println!("{}", if ok { "ok" } else { "FAILED" });
        }
        None => print!("{text}"),
    }
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

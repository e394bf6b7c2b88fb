//! Command-line driver: configure a category, compute products and
//! structure-constant tables, run named verification suites, and emit
//! machine-readable reports.
//!
//! Exit codes: 0 on success (or on the expected outcome of a suite),
//! 2 for usage, parse, and configuration errors, 3 when an enumeration
//! would exceed the budget, 1 when a verification suite fails.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use perhall::config::{QuiverSpec, RunConfig};
use perhall::hall::{product_extended, product_twisted, product_untwisted, ExtHallElt, HallElt};
use perhall::parse::{parse_literal, to_hall_basis, to_periodic_basis};
use perhall::periodic::{OddPeriodicElt, PeriodicAlgebra, PeriodicElt};
use perhall::suites::{run_suite, suite_names, table_periodic_ext};
use perhall::{HallError, KClass, Result};

#[derive(Parser)]
#[command(
    name = "perhall",
    version,
    about = "Exact Hall-algebra engine for quiver representations over finite fields"
)]
struct Cli {
    /// TOML configuration file; individual flags override its fields.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Quiver preset: "a1" (one vertex) or "a2" (one arrow 0 -> 1).
    #[arg(long, global = true)]
    quiver: Option<String>,
    /// Field order (a prime).
    #[arg(long, global = true)]
    q: Option<u64>,
    /// Period of the Z_m-grading.
    #[arg(long, global = true)]
    m: Option<usize>,
    /// Comma-separated per-vertex dimension bound for tables and sweeps.
    #[arg(long, global = true, value_name = "D0,D1,...")]
    max_dim: Option<String>,
    /// Enumeration budget: the largest brute-force sweep allowed.
    #[arg(long, global = true)]
    budget: Option<u128>,
    /// Seed for sampled K-classes in randomized sweeps.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Write output to this file instead of stdout.
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Algebra {
    /// Untwisted Ringel-Hall algebra.
    Hall,
    /// Twisted Hall algebra (v-power of the Euler form).
    HallTw,
    /// Extended twisted Hall algebra with K-elements.
    HallExt,
    /// m-periodic extended derived Hall algebra.
    PeriodicExt,
    /// Odd-periodic derived Hall algebra (K-free basis).
    PeriodicOdd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Multiply two basis-element literals, e.g. "d(1)#0@0 * K[1]@2".
    Product {
        lhs: String,
        rhs: String,
        #[arg(long, value_enum, default_value = "periodic-ext")]
        algebra: Algebra,
    },
    /// Emit the structure-constant table over the dimension-bounded basis.
    Table {
        #[arg(long, value_enum, default_value = "periodic-ext")]
        algebra: Algebra,
    },
    /// Run a named verification suite and write its JSON report.
    Verify {
        #[arg(long)]
        suite: String,
    },
    /// List the isomorphism classes within the dimension bound.
    ListClasses,
}

fn build_config(cli: &Cli) -> Result<RunConfig> {
    let mut cfg = match &cli.config {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| HallError::Config(format!("cannot read {}: {e}", path.display())))?;
            RunConfig::from_toml(&text)?
        }
        None => RunConfig::default(),
    };
    if let Some(name) = &cli.quiver {
        cfg.quiver = QuiverSpec::Named(name.clone());
    }
    if let Some(q) = cli.q {
        cfg.q = q;
    }
    if let Some(m) = cli.m {
        cfg.m = m;
    }
    if let Some(md) = &cli.max_dim {
        let dims: Result<Vec<usize>> = md
            .split(',')
            .map(|p| {
                p.trim()
                    .parse()
                    .map_err(|_| HallError::Config(format!("bad --max-dim entry {p:?}")))
            })
            .collect();
        cfg.max_dim = Some(dims?);
    }
    if let Some(b) = cli.budget {
        cfg.budget = b;
    }
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text)
            .map_err(|e| HallError::Config(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn hall_terms_json(elt: &HallElt) -> serde_json::Value {
    elt.terms()
        .iter()
        .map(|(m, c)| serde_json::json!({ "elt": m.to_string(), "coeff": c }))
        .collect()
}

fn ext_term_label(m: &perhall::IsoClassId, alpha: &KClass) -> String {
    let k_trivial = alpha.0.iter().all(|&a| a == 0);
    match (m.is_zero(), k_trivial) {
        (true, true) => "1".to_string(),
        (false, true) => m.to_string(),
        (true, false) => format!("K{alpha}"),
        (false, false) => format!("{m} * K{alpha}"),
    }
}

fn ext_terms_json(elt: &ExtHallElt) -> serde_json::Value {
    elt.terms()
        .iter()
        .map(|((m, a), c)| serde_json::json!({ "elt": ext_term_label(m, a), "coeff": c }))
        .collect()
}

fn periodic_terms_json(elt: &PeriodicElt) -> serde_json::Value {
    elt.terms()
        .iter()
        .map(|(b, c)| serde_json::json!({ "elt": b.to_string(), "coeff": c }))
        .collect()
}

fn odd_terms_json(alg: &PeriodicAlgebra, elt: &OddPeriodicElt) -> serde_json::Value {
    elt.terms()
        .iter()
        .map(|(classes, c)| {
            let b = perhall::periodic::PeriodicBasisElt {
                classes: classes.clone(),
                ks: alg.zero_ks(),
            };
            serde_json::json!({ "elt": b.to_string(), "coeff": c })
        })
        .collect()
}

fn cmd_product(cfg: &RunConfig, lhs: &str, rhs: &str, algebra: Algebra) -> Result<String> {
    let cat = cfg.build_category()?;
    let llit = parse_literal(lhs)?;
    let rlit = parse_literal(rhs)?;
    let require_no_k = |k: &KClass, pos: usize| -> Result<()> {
        if k.0.iter().any(|&a| a != 0) {
            return Err(HallError::Parse {
                pos,
                msg: "K-elements are not part of this algebra".to_string(),
            });
        }
        Ok(())
    };
    let terms = match algebra {
        Algebra::Hall | Algebra::HallTw => {
            let (lc, lk) = to_hall_basis(&cat, &llit)?;
            let (rc, rk) = to_hall_basis(&cat, &rlit)?;
            require_no_k(&lk, 0)?;
            require_no_k(&rk, 0)?;
            let x = HallElt::basis(cfg.q, lc);
            let y = HallElt::basis(cfg.q, rc);
            let p = if algebra == Algebra::Hall {
                product_untwisted(&cat, &x, &y)?
            } else {
                product_twisted(&cat, &x, &y)?
            };
            hall_terms_json(&p)
        }
        Algebra::HallExt => {
            let (lc, lk) = to_hall_basis(&cat, &llit)?;
            let (rc, rk) = to_hall_basis(&cat, &rlit)?;
            let x = ExtHallElt::basis(cfg.q, lc, lk);
            let y = ExtHallElt::basis(cfg.q, rc, rk);
            ext_terms_json(&product_extended(&cat, &x, &y)?)
        }
        Algebra::PeriodicExt => {
            let alg = PeriodicAlgebra::new(&cat, cfg.m);
            let x = to_periodic_basis(&alg, &llit)?;
            let y = to_periodic_basis(&alg, &rlit)?;
            let p = alg.product_ext(
                &PeriodicElt::basis(cfg.q, x),
                &PeriodicElt::basis(cfg.q, y),
            )?;
            periodic_terms_json(&p)
        }
        Algebra::PeriodicOdd => {
            let alg = PeriodicAlgebra::new(&cat, cfg.m);
            let x = to_periodic_basis(&alg, &llit)?;
            let y = to_periodic_basis(&alg, &rlit)?;
            for k in x.ks.iter().chain(y.ks.iter()) {
                require_no_k(k, 0)?;
            }
            let p = alg.product_odd(
                &OddPeriodicElt::basis(cfg.q, x.classes),
                &OddPeriodicElt::basis(cfg.q, y.classes),
            )?;
            odd_terms_json(&alg, &p)
        }
    };
    let row = serde_json::json!({ "lhs": lhs, "rhs": rhs, "terms": terms });
    Ok(row.to_string() + "\n")
}

fn cmd_table(cfg: &RunConfig, algebra: Algebra) -> Result<String> {
    let cat = cfg.build_category()?;
    let bound = cfg.effective_max_dim()?;
    match algebra {
        Algebra::PeriodicExt => table_periodic_ext(cfg),
        Algebra::Hall | Algebra::HallTw | Algebra::HallExt => {
            let classes = cat.classes_up_to(&bound)?;
            let mut lines = Vec::new();
            for a in &classes {
                for b in &classes {
                    let terms = match algebra {
                        Algebra::Hall => hall_terms_json(&product_untwisted(
                            &cat,
                            &HallElt::basis(cfg.q, a.clone()),
                            &HallElt::basis(cfg.q, b.clone()),
                        )?),
                        Algebra::HallTw => hall_terms_json(&product_twisted(
                            &cat,
                            &HallElt::basis(cfg.q, a.clone()),
                            &HallElt::basis(cfg.q, b.clone()),
                        )?),
                        _ => {
                            let n = cat.quiver().vertex_count();
                            ext_terms_json(&product_extended(
                                &cat,
                                &ExtHallElt::basis(cfg.q, a.clone(), KClass::zero(n)),
                                &ExtHallElt::basis(cfg.q, b.clone(), KClass::zero(n)),
                            )?)
                        }
                    };
                    let row = serde_json::json!({
                        "lhs": a.to_string(),
                        "rhs": b.to_string(),
                        "terms": terms,
                    });
                    lines.push(row.to_string());
                }
            }
            Ok(lines.join("\n") + "\n")
        }
        Algebra::PeriodicOdd => {
            let alg = PeriodicAlgebra::new(&cat, cfg.m);
            let per_slot = cat.classes_up_to(&bound)?;
            let mut basis: Vec<Vec<perhall::IsoClassId>> = vec![Vec::new()];
            for _ in 0..cfg.m {
                let mut next = Vec::new();
                for t in &basis {
                    for c in &per_slot {
                        let mut t2 = t.clone();
                        t2.push(c.clone());
                        next.push(t2);
                    }
                }
                basis = next;
            }
            let mut lines = Vec::new();
            for ta in &basis {
                for tb in &basis {
                    let p = alg.product_odd(
                        &OddPeriodicElt::basis(cfg.q, ta.clone()),
                        &OddPeriodicElt::basis(cfg.q, tb.clone()),
                    )?;
                    let label = |t: &[perhall::IsoClassId]| {
                        perhall::periodic::PeriodicBasisElt {
                            classes: t.to_vec(),
                            ks: alg.zero_ks(),
                        }
                        .to_string()
                    };
                    let row = serde_json::json!({
                        "lhs": label(ta),
                        "rhs": label(tb),
                        "terms": odd_terms_json(&alg, &p),
                    });
                    lines.push(row.to_string());
                }
            }
            Ok(lines.join("\n") + "\n")
        }
    }
}

fn cmd_list_classes(cfg: &RunConfig) -> Result<String> {
    let cat = cfg.build_category()?;
    let bound = cfg.effective_max_dim()?;
    let mut lines = Vec::new();
    for c in cat.classes_up_to(&bound)? {
        let row = serde_json::json!({
            "class": c.to_string(),
            "dim": c.dim.0,
            "aut": cat.aut_order(&c)?.to_string(),
        });
        lines.push(row.to_string());
    }
    Ok(lines.join("\n") + "\n")
}

fn exit_code_for(err: &HallError) -> u8 {
    match err {
        HallError::BudgetExceeded { .. } => 3,
        _ => 2,
    }
}

fn run(cli: &Cli) -> Result<bool> {
    let cfg = build_config(cli)?;
    match &cli.cmd {
        Cmd::Product { lhs, rhs, algebra } => {
            emit(&cli.out, &cmd_product(&cfg, lhs, rhs, *algebra)?)?;
            Ok(true)
        }
        Cmd::Table { algebra } => {
            emit(&cli.out, &cmd_table(&cfg, *algebra)?)?;
            Ok(true)
        }
        Cmd::Verify { suite } => {
            if !suite_names().contains(&suite.as_str()) {
                return Err(HallError::UnknownSuite(suite.clone()));
            }
            let report = run_suite(suite, &cfg)?;
            let text = serde_json::to_string_pretty(&report)
                .map_err(|e| HallError::Config(e.to_string()))?
                + "\n";
            emit(&cli.out, &text)?;
            Ok(report.passed)
        }
        Cmd::ListClasses => {
            emit(&cli.out, &cmd_list_classes(&cfg)?)?;
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

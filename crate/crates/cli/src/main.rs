//! Command-line front end: validate instance files, run the invariant
//! battery, construct instances, build doubles and crossed products.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand};

use qhopf::battery::full_battery;
use qhopf::cocentral::sigma_report;
use qhopf::construct::{cocycle_check, group_algebra, twisted_dual, GroupTable};
use qhopf::crossed::{algebra_semisimple, conjecture_probe, ComoduleAlgebra, CrossedProduct};
use qhopf::error::Error;
use qhopf::integral::{cointegral, modulus};
use qhopf::io;
use qhopf::scalar::FieldSpec;
use qhopf::QuasiHopf;

#[derive(Parser)]
#[command(name = "qhopf", version, about = "Exact kernel for finite-dimensional quasi-Hopf algebras")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check the axiom suite of an instance file; with --sigma, also
    /// check a bilinear form for biinvariance and cocentrality
    Validate {
        file: PathBuf,
        #[arg(long)]
        sigma: Option<PathBuf>,
    },
    /// Run the full invariant battery and print the report
    Report {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Construct instances and emit their JSON
    #[command(subcommand)]
    Make(MakeCmd),
    /// Build the Drinfeld double of a Hopf-case instance (φ = 1), or of a
    /// genuinely quasi instance with explicit coaction data via --psi
    Double {
        file: PathBuf,
        #[arg(long)]
        psi: Option<PathBuf>,
        #[arg(long)]
        json: bool,
        #[arg(long)]
        force: bool,
    },
    /// Build the diagonal crossed product of an instance with a two-sided
    /// comodule algebra file
    Crossed {
        algebra: PathBuf,
        comodule: PathBuf,
        #[arg(long)]
        json: bool,
        #[arg(long)]
        force: bool,
    },
    /// Evaluate the experimental double-integral probe
    ProbeConjecture {
        file: PathBuf,
        #[arg(long)]
        psi: Option<PathBuf>,
        #[arg(long)]
        force: bool,
    },
}

#[derive(Subcommand)]
enum MakeCmd {
    /// Group algebra k[G] from a table file, --cyclic n, or --symmetric n
    Group {
        #[arg(long)]
        table: Option<PathBuf>,
        #[arg(long)]
        cyclic: Option<usize>,
        #[arg(long)]
        symmetric: Option<usize>,
        #[arg(long, default_value = "Q")]
        field: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// ω-twisted dual group algebra from a group and a cocycle file
    TwistedDual {
        #[arg(long)]
        group: Option<PathBuf>,
        #[arg(long)]
        cyclic: Option<usize>,
        #[arg(long)]
        cocycle: PathBuf,
        #[arg(long, default_value = "Q")]
        field: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

fn parse_field(s: &str) -> Result<FieldSpec, Error> {
    if s == "Q" {
        return Ok(FieldSpec::rationals());
    }
    if let Some(p) = s.strip_prefix("GF:") {
        let p: u64 = p
            .parse()
            .map_err(|_| Error::Parse(format!("bad field {s:?}")))?;
        return FieldSpec::prime_field(p);
    }
    Err(Error::Parse(format!("bad field {s:?}: expected Q or GF:p")))
}

fn read_json(path: &Path) -> Result<serde_json::Value, Error> {
    let text = std::fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

fn load_instance(path: &Path) -> Result<QuasiHopf, Error> {
    let h = io::read_instance(&read_json(path)?)?;
    if h.eps_alpha_zero() {
        eprintln!("warning: ε(α) = 0, antipode data kept verbatim (no normalization possible)");
    }
    Ok(h)
}

/// Loads and validates; refuses an invalid instance unless forced.
fn load_validated(path: &Path, force: bool) -> Result<Arc<QuasiHopf>, Error> {
    let h = load_instance(path)?;
    let rep = h.validate();
    if let Some(fail) = rep.first_failure() {
        if !force {
            return Err(Error::IdentityFailed {
                identity: fail.id.clone(),
                witness: fail.witness.clone().unwrap_or_default(),
            });
        }
        eprintln!(
            "warning: proceeding past failed check {} ({})",
            fail.id,
            fail.witness.as_deref().unwrap_or("")
        );
    }
    Ok(Arc::new(h))
}

/// Pretty printer that keeps sparse entries on one line: objects and
/// top-level arrays break, nested arrays stay inline.
fn render(value: &serde_json::Value) -> String {
    fn go(v: &serde_json::Value, indent: usize, out: &mut String) {
        match v {
            serde_json::Value::Object(m) => {
                out.push_str("{\n");
                let pad = "  ".repeat(indent + 1);
                for (i, (k, val)) in m.iter().enumerate() {
                    out.push_str(&pad);
                    out.push_str(&serde_json::to_string(k).unwrap());
                    out.push_str(": ");
                    go(val, indent + 1, out);
                    if i + 1 < m.len() {
                        out.push(',');
                    }
                    out.push('\n');
                }
                out.push_str(&"  ".repeat(indent));
                out.push('}');
            }
            serde_json::Value::Array(a)
                if a.iter().any(|x| x.is_array() || x.is_object()) =>
            {
                out.push_str("[\n");
                let pad = "  ".repeat(indent + 1);
                for (i, val) in a.iter().enumerate() {
                    out.push_str(&pad);
                    out.push_str(&serde_json::to_string(val).unwrap());
                    if i + 1 < a.len() {
                        out.push(',');
                    }
                    out.push('\n');
                }
                out.push_str(&"  ".repeat(indent));
                out.push(']');
            }
            other => out.push_str(&serde_json::to_string(other).unwrap()),
        }
    }
    let mut s = String::new();
    go(value, 0, &mut s);
    s.push('\n');
    s
}

fn emit(value: &serde_json::Value, output: Option<&Path>) -> Result<(), Error> {
    let text = render(value);
    match output {
        Some(p) => std::fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn group_from_args(
    table: Option<&Path>,
    cyclic: Option<usize>,
    symmetric: Option<usize>,
) -> Result<GroupTable, Error> {
    match (table, cyclic, symmetric) {
        (Some(p), None, None) => io::read_group_table(&read_json(p)?),
        (None, Some(n), None) => Ok(GroupTable::cyclic(n)),
        (None, None, Some(n)) => Ok(GroupTable::symmetric(n)),
        _ => Err(Error::InvalidInput(
            "give exactly one of --table, --cyclic, --symmetric".into(),
        )),
    }
}

fn run(cli: Cli) -> Result<bool, Error> {
    match cli.cmd {
        Cmd::Validate { file, sigma } => {
            let h = Arc::new(load_instance(&file)?);
            let rep = h.validate();
            print!("{rep}");
            let mut ok = rep.all_passed();
            if ok {
                match h.derived() {
                    Ok(_) => {
                        for id in qhopf::quasihopf::DERIVED_SUITE_IDS {
                            println!("{id}: PASS");
                        }
                    }
                    Err(Error::IdentityFailed { identity, witness }) => {
                        println!("{identity}: FAIL ({witness})");
                        ok = false;
                    }
                    Err(e) => return Err(e),
                }
            }
            if ok {
                if let Some(sigma_path) = sigma {
                    let entries = io::read_sigma(&read_json(&sigma_path)?, &h)?;
                    let (co, rep_c) = cointegral(&h)?;
                    if !rep_c.all_passed() {
                        print!("{rep_c}");
                        return Ok(false);
                    }
                    let (mu, rep_m) = modulus(&h, &co)?;
                    if !rep_m.all_passed() {
                        print!("{rep_m}");
                        return Ok(false);
                    }
                    let srep = sigma_report(&h, &mu, &entries)?;
                    print!("{srep}");
                    ok = srep.all_passed();
                }
            }
            Ok(ok)
        }
        Cmd::Report { file, json } => {
            let h = Arc::new(load_instance(&file)?);
            let report = full_battery(&h)?;
            if json {
                println!("{}", serde_json::to_string_pretty(&report)?);
            } else {
                println!("field: {}", report.field);
                println!("dim: {}", report.dim);
                println!("axioms:");
                for c in report.axioms.iter().chain(report.checks.iter()) {
                    if c.passed {
                        println!("  {}: PASS", c.id);
                    } else {
                        println!(
                            "  {}: FAIL ({})",
                            c.id,
                            c.witness.as_deref().unwrap_or("no witness")
                        );
                    }
                }
                if let Some(d) = &report.dims {
                    println!("dims: L={} R={} cointegrals={}", d.l, d.r, d.cointegrals);
                }
                if let Some(v) = report.unimodular {
                    println!("unimodular: {v}");
                }
                if let Some(v) = report.semisimple {
                    println!("semisimple: {v}");
                }
                if let Some(v) = &report.quantum_dim {
                    println!("quantum_dim: {v}");
                }
                if let Some(v) = &report.symmetric {
                    println!("symmetric: {v}");
                }
                if let Some(v) = report.radford_ok {
                    println!("radford_ok: {v}");
                }
                if let Some(v) = report.cocentral_dim {
                    println!("cocentral_dim: {v}");
                }
                if let Some(v) = &report.normalized_cointegral {
                    println!("normalized_cointegral: [{}]", v.join(", "));
                }
                println!("all_passed: {}", report.all_passed);
            }
            Ok(report.all_passed)
        }
        Cmd::Make(make) => {
            match make {
                MakeCmd::Group {
                    table,
                    cyclic,
                    symmetric,
                    field,
                    output,
                } => {
                    let g = group_from_args(table.as_deref(), cyclic, symmetric)?;
                    let spec = parse_field(&field)?;
                    let h = group_algebra(&g, spec)?;
                    emit(&io::save_instance(&h), output.as_deref())?;
                }
                MakeCmd::TwistedDual {
                    group,
                    cyclic,
                    cocycle,
                    field,
                    output,
                } => {
                    let g = group_from_args(group.as_deref(), cyclic, None)?;
                    let spec = parse_field(&field)?;
                    let omega = io::read_cocycle(&read_json(&cocycle)?, &g, spec)?;
                    let verdict = cocycle_check(&g, &omega, spec)?;
                    if !verdict.pass {
                        return Err(Error::IdentityFailed {
                            identity: "(1.2)".into(),
                            witness: verdict.witness.unwrap_or_default(),
                        });
                    }
                    let h = twisted_dual(&g, &omega, spec)?;
                    emit(&io::save_instance(&h), output.as_deref())?;
                }
            }
            Ok(true)
        }
        Cmd::Double {
            file,
            psi,
            json,
            force,
        } => {
            let h = load_validated(&file, force)?;
            let data = match psi {
                Some(p) => {
                    let c = io::read_comodule(&read_json(&p)?, &h)?;
                    if c.a.dim() != h.dim() {
                        return Err(Error::InvalidInput(
                            "the double needs coaction data on A = H".into(),
                        ));
                    }
                    c
                }
                None => ComoduleAlgebra::hopf_double_data(&h)?,
            };
            crossed_report(&data, json)
        }
        Cmd::Crossed {
            algebra,
            comodule,
            json,
            force,
        } => {
            let h = load_validated(&algebra, force)?;
            let c = io::read_comodule(&read_json(&comodule)?, &h)?;
            crossed_report(&c, json)
        }
        Cmd::ProbeConjecture { file, psi, force } => {
            let h = load_validated(&file, force)?;
            let data = match psi {
                Some(p) => io::read_comodule(&read_json(&p)?, &h)?,
                None => ComoduleAlgebra::hopf_double_data(&h)?,
            };
            let rep = data.validate()?;
            if let Some(fail) = rep.first_failure() {
                print!("{rep}");
                return Err(Error::IdentityFailed {
                    identity: fail.id.clone(),
                    witness: fail.witness.clone().unwrap_or_default(),
                });
            }
            let (product, rep) = CrossedProduct::build(&data)?;
            if !rep.all_passed() {
                print!("{rep}");
                return Ok(false);
            }
            let (co, rep_c) = cointegral(&h)?;
            if !rep_c.all_passed() {
                print!("{rep_c}");
                return Ok(false);
            }
            let probe = conjecture_probe(&product, &co.lambda, &co.r)?;
            println!("EXPERIMENTAL: double-integral probe");
            println!(
                "  right-product convention (x = r⋈(β⇀λ)): {}",
                probe.right_product_integral
            );
            match probe.classical_convention_integral {
                Some(v) => println!("  mirrored convention (x = (β⇀λ)⋈r): {v}"),
                None => {
                    println!("  mirrored convention: not evaluated (nontrivial reassociator)")
                }
            }
            Ok(true)
        }
    }
}

fn crossed_report(data: &ComoduleAlgebra, json: bool) -> Result<bool, Error> {
    let rep = data.validate()?;
    if !rep.all_passed() {
        print!("{rep}");
        return Ok(false);
    }
    let (product, build_rep) = CrossedProduct::build(data)?;
    let verdict = algebra_semisimple(&product.b);
    let ok = build_rep.all_passed();
    if json {
        let out = serde_json::json!({
            "dim": product.b.dim(),
            "comodule_checks": rep.checks,
            "build_checks": build_rep.checks,
            "semisimple": verdict,
            "all_passed": ok,
        });
        println!("{}", serde_json::to_string_pretty(&out)?);
    } else {
        println!("dim: {}", product.b.dim());
        print!("{rep}");
        print!("{build_rep}");
        println!("semisimple: {verdict:?}");
        println!("all_passed: {ok}");
    }
    Ok(ok)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::from(0),
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            let code = match e {
                Error::Parse(_) | Error::Io(_) | Error::Json(_) => 2,
                _ => 1,
            };
            ExitCode::from(code)
        }
    }
}

use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use ternary::cache;
use ternary::correspond::{self, chan_pair, represents_multiple_all};
use ternary::enumerate::{canonical, primitive_rep_count, rep_count};
use ternary::genus::{genus_of, genus_symbols, spinor_partition};
use ternary::verify::{self, Family, Task, TaskOptions};
use ternary::{Error, TernaryForm};

#[derive(Parser)]
#[command(name = "ternary", version, about = "Positive definite ternary quadratic forms")]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Emit CSV where a table is printed.
    #[arg(long, global = true)]
    csv: bool,
    /// Class-table cache directory (default: $TERNARY_CACHE_DIR or ./cache).
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Discriminant, divisor, level, reciprocal and genus symbols.
    Invariants {
        #[arg(allow_hyphen_values = true)]
        form: TernaryForm,
    },
    /// All reduced classes of a discriminant, grouped by genus.
    Enumerate {
        #[arg(long)]
        disc: u64,
    },
    /// The genus of a form and its spinor-genus partition with evidence.
    Genus {
        #[arg(allow_hyphen_values = true)]
        form: TernaryForm,
        #[arg(long, default_value_t = 10_000)]
        bound: u64,
    },
    /// Number of representations and primitive representations of n.
    Repcount {
        #[arg(allow_hyphen_values = true)]
        form: TernaryForm,
        n: u64,
    },
    /// Matrices witnessing that f represents k·g and g represents k·f.
    Corresponds {
        #[arg(allow_hyphen_values = true)]
        f: TernaryForm,
        #[arg(allow_hyphen_values = true)]
        g: TernaryForm,
        k: u64,
        /// List every witness for f ⊒ k·g up to sign.
        #[arg(long)]
        all_witnesses: bool,
    },
    /// Ascend or descend a form by a prime, with the basis-change trail.
    Transform {
        #[arg(allow_hyphen_values = true)]
        form: TernaryForm,
        #[arg(long, conflicts_with = "descend", required_unless_present = "descend")]
        ascend: Option<u64>,
        #[arg(long)]
        descend: Option<u64>,
        /// With --descend, list the classes of every descent.
        #[arg(long)]
        all_witnesses: bool,
    },
    /// Run a verification task.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct VerifyArgs {
    task: Task,
    #[arg(long)]
    nmax: Option<u64>,
    #[arg(long)]
    kmax: Option<u64>,
    #[arg(long)]
    bound: Option<u64>,
    #[arg(long)]
    samples: Option<u64>,
    /// Values of n (comma separated).
    #[arg(long, value_delimiter = ',')]
    n: Vec<u64>,
    #[arg(long)]
    family: Option<Family>,
    #[arg(long)]
    deltaratio: Option<u64>,
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::Usage(_) | Error::InvalidForm { .. } | Error::NotIsotropic(_) => 2,
        _ => 3,
    }
}

fn emit(json_mode: bool, value: &Value, text: impl FnOnce() -> String) -> io::Result<()> {
    let mut out = io::stdout().lock();
    if json_mode {
        writeln!(out, "{}", serde_json::to_string_pretty(value).expect("serializable"))
    } else {
        writeln!(out, "{}", text())
    }
}

fn run(cli: Cli) -> ternary::Result<u8> {
    if let Some(threads) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| Error::usage(e.to_string()))?;
    }
    let js = cli.json;
    match cli.command {
        Command::Invariants { form } => {
            let inv = genus_symbols(&form)?;
            let value = serde_json::to_value(&inv)?;
            emit(js, &value, || {
                let symbols = |s: &[(ternary::genus::SymbolPlace, i32)]| {
                    s.iter().map(|(p, v)| format!("{p}:{v:+}")).collect::<Vec<_>>().join(" ")
                };
                format!(
                    "form {form}\ndiscriminant {}\ndivisor {}\nlevel {}\nreciprocal {} (divisor {})\nsymbols {}\nreciprocal symbols {}",
                    inv.delta,
                    inv.divisor_m,
                    inv.level_n,
                    inv.reciprocal,
                    inv.reciprocal_divisor_mu,
                    symbols(&inv.symbols_f),
                    symbols(&inv.symbols_phi)
                )
            })?;
        }
        Command::Enumerate { disc } => {
            let dir = cache::cache_dir(cli.cache_dir.as_deref());
            let (table, outcome) = cache::load_or_compute(&dir, disc)?;
            log::info!("class table for {disc}: {outcome:?}");
            if cli.csv {
                let mut out = io::stdout().lock();
                writeln!(out, "genus,a,b,c,r,s,t,automorphisms")?;
                for (g, members) in table.genera.iter().enumerate() {
                    for &i in members {
                        writeln!(out, "{g},{},{}", table.classes[i], table.aut_counts[i])?;
                    }
                }
            } else {
                let value = json!({"table": table, "cache": outcome});
                emit(js, &value, || {
                    let mut s = format!("discriminant {disc}: {} classes in {} genera", table.class_count(), table.genera.len());
                    for (g, members) in table.genera.iter().enumerate() {
                        s.push_str(&format!("\ngenus {g}:"));
                        for &i in members {
                            s.push_str(&format!("\n  ⟨{}⟩ |Aut| = {}", table.classes[i], table.aut_counts[i]));
                        }
                    }
                    s
                })?;
            }
        }
        Command::Genus { form, bound } => {
            let table = genus_of(&form)?;
            let part = spinor_partition(&table, 0, bound)?;
            let value = serde_json::to_value(&part)?;
            emit(js, &value, || {
                let mut s = format!("genus of ⟨{form}⟩: {} classes, {} spinor genera", part.classes.len(), part.block_count());
                for b in 0..part.block_count() {
                    s.push_str(&format!("\nblock {b}:"));
                    for (f, aut) in part.block_members(b) {
                        s.push_str(&format!("\n  ⟨{f}⟩ |Aut| = {aut}"));
                    }
                }
                for row in &part.exceptional_evidence {
                    s.push_str(&format!("\nrepresents {}·{}²: {:?}", row.t, row.m, row.represented));
                }
                for row in &part.splitting_evidence {
                    let m: Vec<String> = row.measures.iter().map(ToString::to_string).collect();
                    s.push_str(&format!("\nweighted measure at {}: {}", row.j, m.join(", ")));
                }
                s
            })?;
        }
        Command::Repcount { form, n } => {
            let (count, primitive) = (rep_count(&form, n), primitive_rep_count(&form, n));
            let value = json!({"form": form, "n": n, "count": count, "primitive": primitive});
            emit(js, &value, || format!("r({n}) = {count}\nprimitive {primitive}"))?;
        }
        Command::Corresponds { f, g, k, all_witnesses } => {
            let pair = chan_pair(&f, &g, k)?;
            let mut value = json!({"f": f, "g": g, "k": k, "pair": pair});
            if all_witnesses {
                value["witnesses"] = serde_json::to_value(represents_multiple_all(&f, &g, k, usize::MAX)?)?;
            }
            emit(js, &value, || match &pair {
                Some(p) => format!(
                    "⟨{f}⟩ ⊒ {k}·⟨{g}⟩ via {:?}\n⟨{g}⟩ ⊒ {k}·⟨{f}⟩ via {:?}\nproduct is scalar: {}",
                    p.forward.p, p.backward.p, p.product_is_scalar
                ),
                None => format!("no pair of matrices relates ⟨{f}⟩ and ⟨{g}⟩ at {k}"),
            })?;
        }
        Command::Transform { form, ascend, descend, all_witnesses } => {
            let (value, text) = if let Some(p) = ascend {
                let trace = correspond::ascent_shape_trace(&form, p)?;
                let image = correspond::ascend(&form, p)?;
                let class = canonical(&image);
                let text = format!("ascent at {p}: ⟨{}⟩ → ⟨{image}⟩ via {:?}\nreduced ⟨{class}⟩", trace.shaped, trace.basis_change.matrix());
                (json!({"trace": trace, "result": image, "reduced": class}), text)
            } else {
                let p = descend.expect("clap requires one of the two");
                let trace = correspond::descent_shape_trace(&form, p)?;
                let image = correspond::descend(&form, p)?;
                let class = canonical(&image);
                let mut value = json!({"trace": trace, "result": image, "reduced": class});
                let mut text = format!("descent at {p}: ⟨{}⟩ → ⟨{image}⟩ via {:?}\nreduced ⟨{class}⟩", trace.shaped, trace.basis_change.matrix());
                if all_witnesses {
                    let all = correspond::descend_all(&form, p)?;
                    text.push_str(&format!("\nall descents: {}", all.iter().map(|f| format!("⟨{f}⟩")).collect::<Vec<_>>().join(" ")));
                    value["all"] = serde_json::to_value(all)?;
                }
                (value, text)
            };
            emit(js, &value, || text)?;
        }
        Command::Verify(args) => {
            let options = TaskOptions {
                nmax: args.nmax,
                kmax: args.kmax,
                bound: args.bound,
                samples: args.samples,
                seed: cli.seed,
                n: args.n,
                family: args.family,
                deltaratio: args.deltaratio,
            };
            let report = verify::run(args.task, &options)?;
            let value = serde_json::to_value(&report)?;
            emit(js, &value, || {
                let failing = report.details.iter().filter(|d| d["ok"] == json!(false)).count();
                format!("{}: {:?} ({} cases, {failing} failing, {} ms)", report.task, report.status, report.details.len(), report.runtime_ms)
            })?;
            return Ok(report.status.exit_code() as u8);
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

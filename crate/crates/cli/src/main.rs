//! `floc`: declare finite frames, spaces and rings, then inspect them.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use finite_locales::coproduct::coproduct;
use finite_locales::corpus::{Bounds, Corpus};
use finite_locales::dsl::{print_canonical, ParseError, Workspace};
use finite_locales::hom::enumerate_frame_maps;
use finite_locales::interp::{spatial_product_map, GroundJoinFamily, Spectrum};
use finite_locales::properties::{analyze, describe_element, Connectedness, Verdict};
use finite_locales::report::{CommandEcho, Report, Stats};
use finite_locales::ring::ring_report;
use finite_locales::suite::{run_suite, SuiteOptions};
use finite_locales::{Caps, Error, Frame};

#[derive(Parser)]
#[command(name = "floc", version, about = "Finite frames, locales and their spectra")]
struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Largest frame or ring; coproducts may reach its square.
    #[arg(long, global = true, env = "FLOC_CAP_ELEMENTS")]
    cap_elements: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and validate declaration files.
    Check {
        files: Vec<PathBuf>,
        /// Print the canonical form instead of a summary.
        #[arg(long)]
        canonical: bool,
    },
    /// Run every property decider on a frame.
    Analyze {
        files: Vec<PathBuf>,
        #[arg(long)]
        frame: String,
        #[arg(long)]
        joins: Option<String>,
    },
    /// List the points of a frame relative to a join family.
    Points {
        files: Vec<PathBuf>,
        #[arg(long)]
        frame: String,
        #[arg(long)]
        joins: Option<String>,
    },
    /// Build the coproduct of two frames.
    Coproduct {
        files: Vec<PathBuf>,
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
        /// Check the natural map onto the opens of the product of spectra.
        #[arg(long)]
        verify_spatial: bool,
    },
    /// Enumerate the frame maps between two frames.
    Maps {
        files: Vec<PathBuf>,
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
    },
    /// Zariski spectrum of a ring.
    Spec {
        files: Vec<PathBuf>,
        #[arg(long)]
        ring: String,
    },
    /// Run the cross-check suite over the built-in corpus.
    Suite {
        #[arg(long, default_value_t = 3)]
        max_poset: usize,
        #[arg(long, default_value_t = 30)]
        max_ring: usize,
        #[arg(long, default_value_t = SuiteOptions::default().seed)]
        seed: u64,
        #[arg(long, default_value_t = SuiteOptions::default().trials)]
        trials: usize,
        /// Write the corpus source to stdout and exit.
        #[arg(long)]
        print_corpus: bool,
        #[arg(long, hide = true)]
        inject_corrupted: bool,
    },
}

enum Failure {
    Input(String),
    Cap(String),
    Violation(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        match e {
            Error::ResourceCap { .. } => Failure::Cap(e.to_string()),
            Error::ShadowMismatch(_) | Error::CharacterizationMismatch(_) => Failure::Violation(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

impl From<ParseError> for Failure {
    fn from(e: ParseError) -> Failure {
        if e.is_resource_cap() {
            Failure::Cap(e.to_string())
        } else {
            Failure::Input(e.to_string())
        }
    }
}

struct Outcome {
    report: Report,
    text: String,
}

fn caps_from(cap: Option<usize>) -> Caps {
    let mut caps = Caps::default();
    if let Some(n) = cap {
        caps.frame_elements = n;
        caps.ring_elements = n;
        caps.coproduct_elements = n.saturating_mul(n);
    }
    caps
}

fn load(files: &[PathBuf], caps: &Caps) -> Result<Workspace, Failure> {
    let sources = files
        .iter()
        .map(|p| {
            std::fs::read_to_string(p)
                .map(|s| (p.display().to_string(), s))
                .map_err(|e| Failure::Input(format!("{}: {e}", p.display())))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Workspace::parse_sources(&sources, caps)?)
}

fn echo(name: &str, files: &[PathBuf]) -> CommandEcho {
    let files: Vec<String> = files.iter().map(|p| p.display().to_string()).collect();
    CommandEcho::new(name).arg("files", files.join(" "))
}

fn frame<'a>(ws: &'a Workspace, name: &str) -> Result<&'a Frame, Failure> {
    ws.frame(name).ok_or_else(|| Failure::Input(format!("no frame named `{name}`")))
}

fn family(ws: &Workspace, frame_name: &str, joins: Option<&str>) -> Result<Option<GroundJoinFamily>, Failure> {
    let Some(j) = joins else { return Ok(None) };
    let d = ws
        .join_family(j)
        .ok_or_else(|| Failure::Input(format!("no join family named `{j}`")))?;
    if d.frame != frame_name {
        return Err(Failure::Input(format!("join family `{j}` is on `{}`, not `{frame_name}`", d.frame)));
    }
    Ok(Some(d.family.clone()))
}

fn yes_no(v: &Verdict) -> String {
    match &v.witness {
        None => "yes".into(),
        Some(w) => format!("no ({w})"),
    }
}

fn names(f: &Frame, set: &finite_locales::BitSet) -> Vec<String> {
    set.iter().map(|a| f.name(a).to_string()).collect()
}

fn run(cli: &Cli) -> Result<Outcome, Failure> {
    let caps = caps_from(cli.cap_elements);
    match &cli.command {
        Command::Check { files, canonical } => {
            let ws = load(files, &caps)?;
            let counts: serde_json::Map<String, Value> =
                ws.counts().iter().map(|(k, n)| (k.to_string(), json!(n))).collect();
            let largest = ws.frames.values().map(|d| d.value.len()).max().unwrap_or(0);
            let objects = ws.counts().iter().map(|(_, n)| n).sum();
            let text_form = print_canonical(&ws);
            let results = if *canonical {
                json!({ "canonical": text_form })
            } else {
                json!({ "declarations": counts })
            };
            let text = if *canonical {
                text_form
            } else {
                let parts: Vec<String> = ws.counts().iter().map(|(k, n)| format!("{n} {k}")).collect();
                format!("ok: {}\n", parts.join(", "))
            };
            let cmd = echo("check", files).arg("canonical", canonical);
            Ok(Outcome {
                report: Report::new(cmd, true, &results, Stats { objects, largest_frame: largest }),
                text,
            })
        }
        Command::Analyze { files, frame: name, joins } => {
            let ws = load(files, &caps)?;
            let f = frame(&ws, name)?;
            let j = family(&ws, name, joins.as_deref())?;
            let probes = Corpus::generate(Bounds::default(), &Caps::default())?.probe_frames();
            let r = analyze(f, j.as_ref(), &probes, &caps)?;
            let mut text = format!("frame {name}: {} elements\n", r.elements);
            let covers: Vec<String> = f
                .covers()
                .into_iter()
                .map(|(a, b)| format!("{} < {}", f.name(a), f.name(b)))
                .collect();
            text += &format!("hasse: {}\n", covers.join("; "));
            text += &format!("points: {}\n", r.points.join(" "));
            text += &format!("T_U: {}\n", yes_no(&r.t_u));
            text += &format!("I-Hausdorff: {}\n", yes_no(&r.i_hausdorff));
            text += &format!("regular: {}\n", yes_no(&r.regular));
            text += &format!("normal: {}\n", yes_no(&r.normal));
            text += &format!("compact (covers): {}\n", yes_no(&r.compact.covers));
            text += &format!("compact (maximal ideals): {}\n", yes_no(&r.compact.maximal_ideals));
            text += &format!(
                "connected: {}\n",
                match &r.connected {
                    Connectedness::Connected => "yes".to_string(),
                    Connectedness::Disconnected { witness } => format!("no ({witness} is complemented)"),
                    Connectedness::Degenerate => "degenerate frame".to_string(),
                }
            );
            text += &format!(
                "p-connected probe: {} over {} test frames\n",
                r.p_connected_probe.witness.as_deref().unwrap_or("no counterexample"),
                r.p_connected_probe.frames_tested
            );
            let s = r.spectrum;
            text += &format!("spectrum: T0 {} T1 {} T2 {} T3 {}\n", s.t0, s.t1, s.t2, s.t3);
            let cmd = echo("analyze", files).arg("frame", name).arg("joins", joins.as_deref().unwrap_or("finitary"));
            let stats = Stats {
                objects: 1,
                largest_frame: f.len(),
            };
            Ok(Outcome {
                report: Report::new(cmd, true, &r, stats),
                text,
            })
        }
        Command::Points { files, frame: name, joins } => {
            let ws = load(files, &caps)?;
            let f = frame(&ws, name)?;
            caps.check_frame(f.len())?;
            let j = family(&ws, name, joins.as_deref())?.unwrap_or_else(|| GroundJoinFamily::finitary(f));
            let sp = Spectrum::relative(&j);
            let pts: Vec<Value> = sp
                .points()
                .iter()
                .zip(sp.space().names())
                .map(|(x, n)| json!({ "name": n, "members": names(f, x) }))
                .collect();
            let opens: Vec<Vec<String>> = sp
                .space()
                .opens()
                .iter()
                .map(|o| o.iter().map(|i| sp.space().name(i).to_string()).collect())
                .collect();
            let mut text = format!("{} points of {name}\n", sp.len());
            for (x, n) in sp.points().iter().zip(sp.space().names()) {
                text += &format!("  {n} = {{{}}}\n", names(f, x).join(", "));
            }
            text += &format!("{} opens\n", opens.len());
            let results = json!({ "frame": name, "points": pts, "opens": opens });
            let cmd = echo("points", files).arg("frame", name).arg("joins", joins.as_deref().unwrap_or("finitary"));
            let stats = Stats {
                objects: sp.len(),
                largest_frame: f.len(),
            };
            Ok(Outcome {
                report: Report::new(cmd, true, &results, stats),
                text,
            })
        }
        Command::Coproduct {
            files,
            left,
            right,
            verify_spatial,
        } => {
            let ws = load(files, &caps)?;
            let (l, r) = (frame(&ws, left)?, frame(&ws, right)?);
            let c = coproduct(l, r, &caps)?;
            let elements: Vec<String> = c.base().elements().map(|e| describe_element(&c, e)).collect();
            let mut ok = true;
            let mut spatial = Value::Null;
            let mut text = format!("{left} ⊕ {right}: {} elements\n", c.base().len());
            if c.base().len() <= 64 {
                for (e, d) in elements.iter().enumerate() {
                    text += &format!("  {} = {d}\n", c.base().name(e));
                }
            }
            if *verify_spatial {
                let phi = spatial_product_map(&c, &Spectrum::classical(l), &Spectrum::classical(r))?;
                ok = phi.classify().isomorphism;
                spatial = json!(ok);
                text += &format!(
                    "natural map onto Ω(ΣL × ΣM): {}\n",
                    if ok { "isomorphism" } else { "NOT an isomorphism" }
                );
            }
            let results = json!({
                "left": left,
                "right": right,
                "elements": elements,
                "order": c.base().canonical_text(),
                "spatial_isomorphism": spatial,
            });
            let cmd = echo("coproduct", files)
                .arg("left", left)
                .arg("right", right)
                .arg("verify_spatial", verify_spatial);
            let stats = Stats {
                objects: 1,
                largest_frame: c.base().len(),
            };
            Ok(Outcome {
                report: Report::new(cmd, ok, &results, stats),
                text,
            })
        }
        Command::Maps { files, from, to } => {
            let ws = load(files, &caps)?;
            let (a, b) = (frame(&ws, from)?, frame(&ws, to)?);
            let maps = enumerate_frame_maps(a, b, &caps)?;
            let mut rows = Vec::new();
            let mut text = format!("{} frame maps {from} → {to}\n", maps.len());
            for f in &maps {
                let class = f.classify();
                let open = f.is_open()?;
                let pairs: Vec<String> = a.elements().map(|x| format!("{} -> {}", a.name(x), b.name(f.apply(x)))).collect();
                let mut tags = Vec::new();
                if class.isomorphism {
                    tags.push("iso");
                } else if class.injective {
                    tags.push("injective");
                } else if class.surjective {
                    tags.push("surjective");
                }
                if open {
                    tags.push("open");
                }
                text += &format!("  {{ {} }} {}", pairs.join("; "), tags.join(" ")).trim_end();
                text.push('\n');
                rows.push(json!({
                    "image": f.image().iter().map(|&y| b.name(y)).collect::<Vec<_>>(),
                    "injective": class.injective,
                    "surjective": class.surjective,
                    "isomorphism": class.isomorphism,
                    "open": open,
                }));
            }
            let results = json!({ "from": from, "to": to, "maps": rows });
            let cmd = echo("maps", files).arg("from", from).arg("to", to);
            let stats = Stats {
                objects: maps.len(),
                largest_frame: a.len().max(b.len()),
            };
            Ok(Outcome {
                report: Report::new(cmd, true, &results, stats),
                text,
            })
        }
        Command::Spec { files, ring } => {
            let ws = load(files, &caps)?;
            let r = ws
                .ring(ring)
                .ok_or_else(|| Failure::Input(format!("no ring named `{ring}`")))?;
            let rep = ring_report(r)?;
            let mut text = format!("Spec {ring}: {} points\n", rep.primes.len());
            text += &format!("  primes: {}\n", rep.primes.join(" "));
            text += &format!("  maximal: {}\n", rep.maximal.join(" "));
            text += &format!("  nilradical: {}\n", rep.nilradical);
            text += &format!("  opens: {} (discrete: {})\n", rep.opens, rep.discrete);
            text += &format!("  sober: {}\n", rep.sober);
            text += &format!("  idempotents: {}\n", rep.idempotents.join(" "));
            let cmd = echo("spec", files).arg("ring", ring);
            let stats = Stats {
                objects: rep.primes.len(),
                largest_frame: rep.opens,
            };
            Ok(Outcome {
                report: Report::new(cmd, true, &rep, stats),
                text,
            })
        }
        Command::Suite {
            max_poset,
            max_ring,
            seed,
            trials,
            print_corpus,
            inject_corrupted,
        } => {
            let bounds = Bounds {
                max_poset: *max_poset,
                max_ring: *max_ring,
            };
            if *print_corpus {
                let c = Corpus::generate(bounds, &caps)?;
                let text = c.source();
                let cmd = CommandEcho::new("suite").arg("print_corpus", true);
                let results = json!({ "source": text });
                return Ok(Outcome {
                    report: Report::new(cmd, true, &results, Stats::default()),
                    text,
                });
            }
            let opts = SuiteOptions {
                bounds,
                seed: *seed,
                trials: *trials,
                corrupt: *inject_corrupted,
            };
            let r = run_suite(opts, &caps)?;
            let mut text = String::new();
            for c in &r.checks {
                let label = c.criterion.map(|n| format!("[{n:>2}]")).unwrap_or_else(|| "    ".into());
                text += &format!(
                    "{} {label} {:<24} {:>7} cases  {}\n",
                    if c.passed { "pass" } else { "FAIL" },
                    c.id,
                    c.cases,
                    c.title
                );
                if let Some(w) = &c.witness {
                    text += &format!("            witness: {w}\n");
                }
            }
            let failed = r.checks.iter().filter(|c| !c.passed).count();
            text += &format!(
                "{} checks, {failed} failed ({} frames, {} spaces, {} rings, {} maps)\n",
                r.checks.len(),
                r.corpus.frames,
                r.corpus.spaces,
                r.corpus.rings,
                r.corpus.maps
            );
            let cmd = CommandEcho::new("suite")
                .arg("max_poset", max_poset)
                .arg("max_ring", max_ring)
                .arg("seed", seed)
                .arg("trials", trials);
            let stats = Stats {
                objects: r.checks.len(),
                largest_frame: 0,
            };
            Ok(Outcome {
                report: Report::new(cmd, r.passed, &r, stats),
                text,
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            match cli.format {
                Format::Text => print!("{}", out.text),
                Format::Json => print!("{}", out.report.to_json()),
            }
            if out.report.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Violation(m)) => {
            eprintln!("violation: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Input(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Cap(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(3)
        }
    }
}

use clap::{Args, Parser, Subcommand, ValueEnum};
use dlrefine::labelset::{concept_label_set, node_label_set, LabelSet, LabelSetError};
use dlrefine::nlgen::{render_description, Lexicon};
use dlrefine::oracle::verify::{verify_all_rules, RuleVerdict, VerifyConfig};
use dlrefine::reasoner::{classify, materialize};
use dlrefine::refiner::{semantic_refine_with, RefineOutcome, TraceEntry, Variant};
use dlrefine::{parse_ontology, Ontology};
use serde_json::json;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use thiserror::Error;

#[derive(Parser, Debug)]
#[command(
    name = "dlrefine",
    version,
    about = "Label-sets, refinement and descriptions for .onto ontologies"
)]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// `role = verb | noun` overrides used by `describe`
    #[arg(long, global = true)]
    lexicon: Option<PathBuf>,
    #[arg(long, default_value_t = 0, global = true)]
    seed: u64,
    /// Largest domain enumerated exhaustively by `verify-rules`
    #[arg(long, default_value_t = 3, global = true, value_parser = clap::value_parser!(u64).range(1..=64))]
    max_domain: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct Entity {
    #[arg(long)]
    individual: Option<String>,
    #[arg(long)]
    concept: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the label-set of an individual or concept
    Labelset {
        ontology: PathBuf,
        #[command(flatten)]
        entity: Entity,
        #[arg(long)]
        refined: bool,
    },
    /// Describe an individual or concept in English
    Describe {
        ontology: PathBuf,
        #[command(flatten)]
        entity: Entity,
        /// Render the unrefined label-set instead
        #[arg(long)]
        traditional: bool,
    },
    /// Show every rule firing while refining an individual's label-set
    Trace {
        ontology: PathBuf,
        #[arg(long)]
        individual: String,
    },
    /// Check every refinement rule against finite models
    VerifyRules {
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 5)]
        sample_domain: usize,
        /// Swap in a known-unsound rule variant (`7c-disjunction`)
        #[arg(long, hide = true)]
        inject_bad_rule: Option<String>,
    },
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{}: {source}", .path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{}: {source}", .path.display())]
    Parse {
        path: PathBuf,
        source: dlrefine::ParseError,
    },
    #[error("{0}")]
    Lexicon(#[from] dlrefine::nlgen::LexiconError),
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    LabelSet(#[from] LabelSetError),
    #[error("{0}")]
    Oracle(#[from] dlrefine::oracle::OracleError),
    #[error("{failed} rule(s) failed verification")]
    Counterexample { failed: usize, report: String },
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Io { .. } | CliError::Parse { .. } | CliError::Lexicon(_) | CliError::Usage(_) => 1,
            CliError::Oracle(_) => 1,
            CliError::LabelSet(LabelSetError::UnknownIndividual(_) | LabelSetError::UnknownConcept(_)) => 2,
            CliError::LabelSet(LabelSetError::Inconsistent { .. } | LabelSetError::Unsatisfiable(_)) => 3,
            CliError::Counterexample { .. } => 4,
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn load(path: &Path) -> Result<Ontology, CliError> {
    let text = read(path)?;
    parse_ontology(&text).map_err(|source| CliError::Parse {
        path: path.to_path_buf(),
        source,
    })
}

/// Unrefined label-set of the requested entity.
fn label_set_for(o: &Ontology, entity: &Entity) -> Result<LabelSet, CliError> {
    match (&entity.individual, &entity.concept) {
        (Some(x), None) => {
            let tax = classify(o);
            let m = materialize(o, &tax);
            Ok(node_label_set(x, &m, &tax)?)
        }
        (None, Some(c)) => Ok(concept_label_set(c, o)?),
        _ => Err(CliError::Usage("give exactly one of --individual or --concept".into())),
    }
}

fn refine(o: &Ontology, ls: &LabelSet) -> RefineOutcome {
    let tax = classify(o);
    semantic_refine_with(ls, o, &tax, Variant::Standard)
}

fn pretty(v: &serde_json::Value) -> String {
    serde_json::to_string_pretty(v).expect("json values serialize")
}

fn labelset_text(ls: &LabelSet) -> String {
    let mut out = String::new();
    for l in ls.canonical_labels() {
        out.push_str(&l);
        out.push('\n');
    }
    for d in &ls.deferred {
        out.push_str(&format!("deferred {}\n", d.canonical()));
    }
    out
}

fn trace_text(trace: &[TraceEntry]) -> String {
    let mut out = String::new();
    for e in trace {
        match &e.rule {
            Some(rule) if e.outputs.is_empty() => {
                out.push_str(&format!("[{}] {} drops {}\n", e.ruleset, rule, e.inputs.join(", ")));
            }
            Some(rule) => out.push_str(&format!(
                "[{}] {} {} => {}\n",
                e.ruleset,
                rule,
                e.inputs.join(", "),
                e.outputs.join(", ")
            )),
            None => {
                if !e.pr_marked.is_empty() {
                    out.push_str(&format!("[{}] marked {}\n", e.ruleset, e.pr_marked.join(", ")));
                }
                if !e.purged.is_empty() {
                    out.push_str(&format!("[{}] purged {}\n", e.ruleset, e.purged.join(", ")));
                }
            }
        }
    }
    out
}

fn verdict_json(v: &RuleVerdict) -> serde_json::Value {
    json!({
        "rule": v.rule.name(),
        "sound": v.sound(),
        "instances": v.instances,
        "checked": v.checked,
        "sampled": v.sampled,
        "inapplicable": v.inapplicable,
        "counterexample": v.counterexample,
    })
}

fn run(cli: &Cli) -> Result<String, CliError> {
    let json_out = cli.format == Format::Json;
    match &cli.command {
        Command::Labelset {
            ontology,
            entity,
            refined,
        } => {
            let o = load(ontology)?;
            let mut ls = label_set_for(&o, entity)?;
            if *refined {
                ls = refine(&o, &ls).refined;
            }
            Ok(if json_out {
                pretty(&ls.to_json()) + "\n"
            } else {
                labelset_text(&ls)
            })
        }
        Command::Describe {
            ontology,
            entity,
            traditional,
        } => {
            let o = load(ontology)?;
            let lexicon = match &cli.lexicon {
                Some(p) => Lexicon::parse(&read(p)?)?,
                None => Lexicon::default(),
            };
            let mut ls = label_set_for(&o, entity)?;
            if !*traditional {
                ls = refine(&o, &ls).refined;
            }
            let subject = entity
                .individual
                .as_ref()
                .or(entity.concept.as_ref())
                .expect("entity given");
            let d = render_description(subject, &ls, &lexicon);
            Ok(if json_out {
                pretty(&serde_json::to_value(&d).expect("descriptions serialize")) + "\n"
            } else {
                d.sentence + "\n"
            })
        }
        Command::Trace { ontology, individual } => {
            let o = load(ontology)?;
            let entity = Entity {
                individual: Some(individual.clone()),
                concept: None,
            };
            let ls = label_set_for(&o, &entity)?;
            let out = refine(&o, &ls);
            Ok(if json_out {
                pretty(&out.trace_json()) + "\n"
            } else {
                let mut s = trace_text(&out.trace);
                s.push_str(&format!("refined: {}\n", out.refined.canonical_labels().join(", ")));
                s
            })
        }
        Command::VerifyRules {
            samples,
            sample_domain,
            inject_bad_rule,
        } => {
            let variant = match inject_bad_rule.as_deref() {
                None => Variant::Standard,
                Some("7c-disjunction") => Variant::FaultyDisjunction,
                Some(other) => return Err(CliError::Usage(format!("unknown rule mutation `{other}`"))),
            };
            let cfg = VerifyConfig {
                max_domain: cli.max_domain as usize,
                samples: *samples,
                sample_domain: *sample_domain,
                seed: cli.seed,
            };
            let verdicts = verify_all_rules(variant, &cfg)?;
            let failed = verdicts.iter().filter(|v| !v.sound()).count();
            let text = if json_out {
                pretty(&serde_json::Value::Array(verdicts.iter().map(verdict_json).collect())) + "\n"
            } else {
                let mut s = String::new();
                for v in &verdicts {
                    let status = if v.sound() { "holds" } else { "FAILS" };
                    s.push_str(&format!(
                        "{:<3} {}  instances={} checked={} sampled={}\n",
                        v.rule.name(),
                        status,
                        v.instances,
                        v.checked,
                        v.sampled
                    ));
                    if !v.inapplicable.is_empty() {
                        s.push_str(&format!("    did not fire on: {:?}\n", v.inapplicable));
                    }
                    if let Some(cx) = &v.counterexample {
                        s.push_str(&format!(
                            "    counterexample: {}\n",
                            serde_json::to_string(cx).expect("counterexamples serialize")
                        ));
                    }
                }
                s
            };
            if failed > 0 {
                return Err(CliError::Counterexample { failed, report: text });
            }
            Ok(text)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            if let CliError::Counterexample { report, .. } = &e {
                print!("{report}");
            }
            eprintln!("dlrefine: {}", e);
            ExitCode::from(e.exit_code())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const ACAD: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/../core/fixtures/acad.onto");

    fn golden(name: &str) -> String {
        let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
        std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
    }

    fn run_args(args: &[&str]) -> Result<String, CliError> {
        let mut argv = vec!["dlrefine"];
        argv.extend_from_slice(args);
        run(&Cli::try_parse_from(argv).expect("arguments parse"))
    }

    fn ok(args: &[&str]) -> String {
        run_args(args).unwrap_or_else(|e| panic!("{args:?}: {e}"))
    }

    #[test]
    fn labelset_outputs() {
        assert_eq!(
            ok(&["labelset", ACAD, "--individual", "sam", "--refined"]),
            golden("labelset_sam_refined.txt")
        );
        assert_eq!(
            ok(&["--format", "json", "labelset", ACAD, "--individual", "tom"]),
            golden("labelset_tom.json")
        );
    }

    #[test]
    fn describe_outputs() {
        let cases = [
            (vec!["describe", ACAD, "--individual", "tom"], "describe_tom.txt"),
            (vec!["describe", ACAD, "--individual", "bob"], "describe_bob.txt"),
            (
                vec!["describe", ACAD, "--concept", "IITPhdStudent"],
                "describe_iitphdstudent.txt",
            ),
            (
                vec!["describe", ACAD, "--individual", "tom", "--traditional"],
                "describe_tom_traditional.txt",
            ),
            (
                vec!["--format", "json", "describe", ACAD, "--individual", "sam"],
                "describe_sam.json",
            ),
        ];
        for (args, file) in cases {
            assert_eq!(ok(&args), golden(file), "{file}");
        }
    }

    #[test]
    fn concept_description_fragments() {
        let out = ok(&["describe", ACAD, "--concept", "IITPhdStudent"]);
        assert!(out.contains("exactly one professor as advisor"), "{out}");
        assert!(
            out.contains("at least 1 teaching staff and not professor as advisor"),
            "{out}"
        );
        assert!(!out.contains('<') && !out.contains('>'));
    }

    #[test]
    fn trace_outputs() {
        let sam = ok(&["trace", ACAD, "--individual", "sam"]);
        assert_eq!(sam, golden("trace_sam.txt"));
        let rules: Vec<&str> = sam
            .lines()
            .filter_map(|l| l.split_whitespace().nth(1))
            .filter(|w| w.len() == 2 && w.as_bytes()[0].is_ascii_digit())
            .collect();
        assert_eq!(rules, ["1a", "1a", "5c", "6c", "7c"]);
        assert_eq!(ok(&["trace", ACAD, "--individual", "bob"]), golden("trace_bob.txt"));
        assert_eq!(
            ok(&["--format", "json", "trace", ACAD, "--individual", "bob"]),
            golden("trace_bob.json")
        );
    }

    #[test]
    fn json_is_deterministic() {
        let args = ["--format", "json", "trace", ACAD, "--individual", "sam"];
        let first = ok(&args);
        for _ in 0..3 {
            assert_eq!(ok(&args), first);
        }
        let v: serde_json::Value = serde_json::from_str(&first).unwrap();
        assert!(v.as_array().is_some_and(|a| !a.is_empty()));
    }

    #[test]
    fn error_exit_codes() {
        let e = run_args(&["labelset", ACAD, "--individual", "nobody"]).unwrap_err();
        assert_eq!(e.exit_code(), 2);
        let e = run_args(&["labelset", ACAD, "--concept", "Nothing"]).unwrap_err();
        assert_eq!(e.exit_code(), 2);
        let e = run_args(&["labelset", "/nonexistent.onto", "--individual", "tom"]).unwrap_err();
        assert_eq!(e.exit_code(), 1);
        let bad = concat!(env!("CARGO_MANIFEST_DIR"), "/../core/fixtures/nonsimple_atleast.onto");
        let e = run_args(&["labelset", bad, "--concept", "Machine"]).unwrap_err();
        assert_eq!(e.exit_code(), 1);
        assert!(e.to_string().contains("line 2, column 30"), "{e}");
    }

    #[test]
    fn inconsistent_individual_exits_3() {
        let dir = std::env::temp_dir().join(format!("dlrefine-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("clash.onto");
        std::fs::write(&path, "DISJOINT A B\nA(x)\nB(x)\n").unwrap();
        let e = run_args(&["labelset", path.to_str().unwrap(), "--individual", "x"]).unwrap_err();
        assert_eq!(e.exit_code(), 3);
        std::fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn verify_rules_default_passes() {
        let out = ok(&["verify-rules", "--samples", "200"]);
        assert_eq!(out.lines().filter(|l| l.contains(" holds ")).count(), 15, "{out}");
    }

    #[test]
    fn injected_bad_rule_is_caught() {
        match run_args(&["verify-rules", "--samples", "50", "--inject-bad-rule", "7c-disjunction"]) {
            Err(e @ CliError::Counterexample { .. }) => {
                assert_eq!(e.exit_code(), 4);
                if let CliError::Counterexample { failed, report } = e {
                    assert_eq!(failed, 1);
                    assert!(
                        report.lines().any(|l| l.starts_with("7c ") && l.contains("FAILS")),
                        "{report}"
                    );
                }
            }
            other => panic!("expected a counterexample, got {other:?}"),
        }
        let e = run_args(&["verify-rules", "--inject-bad-rule", "9z"]).unwrap_err();
        assert_eq!(e.exit_code(), 1);
    }

    #[test]
    fn verify_rules_small_domain() {
        ok(&["--max-domain", "1", "verify-rules", "--samples", "10"]);
        assert!(Cli::try_parse_from(["dlrefine", "--max-domain", "0", "verify-rules"]).is_err());
    }
}

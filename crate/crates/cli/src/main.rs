//! Command-line front end: checking, embedding, interpreting, extracting,
//! verifying, equivalence testing, correspondence runs and the end-to-end
//! pipeline.
//!
//! Exit codes: 0 success, 1 logical failure (rejection or mismatch),
//! 2 inconclusive (budget exhausted), 3 usage or parse error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use linwit_core::calculus::check_derivation;
use linwit_core::corpus::{source_formulas, CorpusConfig};
use linwit_core::embed::{embed, translate_proof, Embedding};
use linwit_core::extract::{check_extraction_wellformed, extract, principle_realizer};
use linwit_core::formula::SystemId;
use linwit_core::interp::interpret;
use linwit_core::modality::{all_modalities, modality_by_name, Modality};
use linwit_core::model::{
    models, semantic_equiv, verify_instance, EquivVerdict, EvalBudget, Sampling, SequentInstance,
    Signature,
};
use linwit_core::principles::{default_instances, principle_formula};
use linwit_core::sexpr::Sexpr;
use linwit_core::standard::{correspondence_check, StandardInterp, Verdict};
use linwit_core::surface;

const EXIT_OK: u8 = 0;
const EXIT_FAIL: u8 = 1;
const EXIT_INCONCLUSIVE: u8 = 2;
const EXIT_USAGE: u8 = 3;

const DOMAIN_SIZE_ENV: &str = "LINWIT_DOMAIN_SIZE";

#[derive(Parser)]
#[command(
    name = "linwit",
    about = "Sequent checking and witness extraction for intuitionistic linear logic",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Human,
    Structured,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModalityArg {
    Mr,
    Dn,
    Dia,
}

impl ModalityArg {
    fn get(self) -> &'static dyn Modality {
        let name = match self {
            ModalityArg::Mr => "mr",
            ModalityArg::Dn => "dn",
            ModalityArg::Dia => "dia",
        };
        modality_by_name(name).expect("registered modality")
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum WhichEmbedding {
    Star,
    Circle,
    Simplified,
}

#[derive(Args)]
struct SizeArg {
    /// Maximum carrier size for the ground type.
    #[arg(long, default_value_t = default_domain_size())]
    size: usize,
}

fn default_domain_size() -> usize {
    std::env::var(DOMAIN_SIZE_ENV)
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(2)
}

#[derive(Subcommand)]
enum Command {
    /// Check a derivation file against a system.
    Check {
        #[arg(long, default_value = "ill")]
        system: String,
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Human)]
        format: Format,
    },
    /// Translate a source formula into the linear language.
    Embed {
        #[arg(long, value_enum)]
        which: WhichEmbedding,
        file: PathBuf,
    },
    /// Interpret a linear formula given on the command line.
    Interpret {
        #[arg(long, value_enum)]
        modality: ModalityArg,
        #[arg(long)]
        simplified_with: bool,
        formula: String,
        #[arg(long, value_enum, default_value_t = Format::Human)]
        format: Format,
    },
    /// Extract witnesses from a checked derivation file.
    Extract {
        #[arg(long, value_enum)]
        modality: ModalityArg,
        #[arg(long, default_value = "ill")]
        system: String,
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Structured)]
        format: Format,
    },
    /// Verify an extraction document in all finite models up to a size.
    Verify {
        #[arg(long, default_value_t = default_domain_size())]
        domain_size: usize,
        file: PathBuf,
    },
    /// Decide semantic equivalence of two formulas given on the command
    /// line.
    Equiv {
        #[command(flatten)]
        size: SizeArg,
        formula_a: String,
        formula_b: String,
    },
    /// Run the correspondence checks over a generated corpus.
    Correspond {
        #[arg(long)]
        which: String,
        #[arg(long, default_value_t = 3)]
        depth: usize,
        #[command(flatten)]
        size: SizeArg,
        #[arg(long, default_value_t = 40)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Format::Human)]
        format: Format,
    },
    /// Render the characterization principles, compute realizers and
    /// validate them.
    Principles {
        #[arg(long)]
        modality: Option<ModalityArg>,
        #[command(flatten)]
        size: SizeArg,
        #[arg(long, value_enum, default_value_t = Format::Human)]
        format: Format,
    },
    /// Source proof file -> translation -> extraction -> verification.
    Pipeline {
        #[arg(long, value_enum)]
        modality: ModalityArg,
        file: PathBuf,
        #[arg(long, default_value_t = default_domain_size())]
        domain_size: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    ExitCode::from(run(cli.command))
}

fn usage(msg: impl std::fmt::Display) -> u8 {
    eprintln!("error: {msg}");
    EXIT_USAGE
}

fn failure(msg: impl std::fmt::Display) -> u8 {
    eprintln!("{msg}");
    EXIT_FAIL
}

fn read_file(path: &PathBuf) -> Result<String, u8> {
    std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn write_out(out: &Option<PathBuf>, text: &str) -> Result<(), u8> {
    match out {
        Some(path) => {
            std::fs::write(path, text).map_err(|e| usage(format!("{}: {e}", path.display())))
        }
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn run(cmd: Command) -> u8 {
    match run_inner(cmd) {
        Ok(code) => code,
        Err(code) => code,
    }
}

fn run_inner(cmd: Command) -> Result<u8, u8> {
    match cmd {
        Command::Check {
            system,
            file,
            format,
        } => {
            let sys = SystemId::parse(&system).ok_or_else(|| usage("unknown system"))?;
            let src = read_file(&file)?;
            let d = surface::parse_derivation(&src).map_err(|e| usage(e))?;
            match check_derivation(&d, sys) {
                Ok(seq) => {
                    match format {
                        Format::Human => {
                            println!("accepted under {sys}: {}", surface::sequent_to_sexpr(&seq))
                        }
                        Format::Structured => println!(
                            "{}",
                            Sexpr::list([
                                Sexpr::sym("checked"),
                                Sexpr::list([Sexpr::sym("system"), Sexpr::sym(sys.name())]),
                                surface::sequent_to_sexpr(&seq),
                            ])
                        ),
                    }
                    Ok(EXIT_OK)
                }
                Err(e) => Ok(failure(format!("rejected: {e}"))),
            }
        }
        Command::Embed { which, file } => {
            let src = read_file(&file)?;
            let f = surface::parse_formula(&src).map_err(|e| usage(e))?;
            let which = match which {
                WhichEmbedding::Star => Embedding::Star,
                WhichEmbedding::Circle => Embedding::Circle,
                WhichEmbedding::Simplified => Embedding::Simplified,
            };
            println!("{}", surface::formula_to_sexpr(&embed(which, &f)));
            Ok(EXIT_OK)
        }
        Command::Interpret {
            modality,
            simplified_with,
            formula,
            format,
        } => {
            let f = surface::parse_formula(&formula).map_err(|e| usage(e))?;
            let i = interpret(&f, modality.get(), simplified_with).map_err(|e| failure(e))?;
            match format {
                Format::Structured => println!("{}", surface::interpreted_to_sexpr(&i)),
                Format::Human => {
                    let vars = |vs: &[linwit_core::TypedVar]| {
                        vs.iter()
                            .map(|v| format!("{} : {}", v.name, v.ty))
                            .collect::<Vec<_>>()
                            .join(", ")
                    };
                    println!("witnesses:  {}", vars(&i.witnesses));
                    println!("challenges: {}", vars(&i.challenges));
                    println!("matrix:     {}", surface::formula_to_sexpr(&i.matrix));
                }
            }
            Ok(EXIT_OK)
        }
        Command::Extract {
            modality,
            system,
            file,
            out,
            format,
        } => {
            let sys = SystemId::parse(&system).ok_or_else(|| usage("unknown system"))?;
            let src = read_file(&file)?;
            let d = surface::parse_derivation(&src).map_err(|e| usage(e))?;
            let r = extract(&d, modality.get(), sys).map_err(|e| failure(e))?;
            let report = check_extraction_wellformed(&r);
            if let Some(v) = report.violation {
                return Ok(failure(format!("extraction is not well-formed: {v}")));
            }
            let doc = surface::ExtractionDoc::from(&r);
            let text = match format {
                Format::Structured => surface::extraction_to_sexpr(&doc).to_string(),
                Format::Human => human_extraction(&doc),
            };
            write_out(&out, &text)?;
            Ok(EXIT_OK)
        }
        Command::Verify { domain_size, file } => {
            let src = read_file(&file)?;
            let doc = surface::parse_extraction(&src).map_err(|e| usage(e))?;
            verify_doc_instance(&doc.instance(), &doc_signature(&doc)?, domain_size)
        }
        Command::Equiv {
            size,
            formula_a,
            formula_b,
        } => {
            let a = surface::parse_formula(&formula_a).map_err(|e| usage(e))?;
            let b = surface::parse_formula(&formula_b).map_err(|e| usage(e))?;
            let sig = Signature::infer(&[&a, &b]).map_err(|e| usage(e))?;
            let mut budget = EvalBudget::standard();
            note_sampling(&sig, size.size, &Sampling::default());
            match semantic_equiv(&a, &b, size.size, &sig, &Sampling::default(), &mut budget) {
                Ok(EquivVerdict::Equivalent) => {
                    println!("equivalent up to size {}", size.size);
                    Ok(EXIT_OK)
                }
                Ok(EquivVerdict::Inequivalent) => Ok(failure("distinguished by a finite model")),
                Ok(EquivVerdict::Inconclusive) => {
                    println!("inconclusive: budget exhausted");
                    Ok(EXIT_INCONCLUSIVE)
                }
                Err(e) => Err(usage(e)),
            }
        }
        Command::Correspond {
            which,
            depth,
            size,
            count,
            seed,
            format,
        } => {
            let which =
                StandardInterp::parse(&which).ok_or_else(|| usage("unknown interpretation"))?;
            let cfg = CorpusConfig { depth, count, seed };
            let corpus = source_formulas(&cfg);
            let mut budget = EvalBudget::standard();
            let sampling = Sampling {
                seed,
                ..Sampling::default()
            };
            let mut mismatches = 0usize;
            let mut inconclusive = 0usize;
            let mut lines = Vec::new();
            for f in &corpus {
                let v = correspondence_check(which, f, size.size, &sampling, &mut budget)
                    .map_err(|e| failure(e))?;
                match v {
                    Verdict::Mismatch => mismatches += 1,
                    Verdict::Inconclusive => inconclusive += 1,
                    _ => {}
                }
                lines.push((f, v));
            }
            match format {
                Format::Human => {
                    for (f, v) in &lines {
                        println!("{:<18} {}", v.name(), surface::formula_to_sexpr(f));
                    }
                    println!(
                        "checked {} formulas under {}: {} mismatches, {} inconclusive",
                        lines.len(),
                        which.name(),
                        mismatches,
                        inconclusive
                    );
                }
                Format::Structured => {
                    let mut items = vec![
                        Sexpr::sym("correspondence"),
                        Sexpr::list([Sexpr::sym("which"), Sexpr::sym(which.name())]),
                        Sexpr::list([Sexpr::sym("seed"), Sexpr::sym(seed.to_string())]),
                    ];
                    for (f, v) in &lines {
                        items.push(Sexpr::list([
                            Sexpr::sym("entry"),
                            Sexpr::sym(v.name()),
                            surface::formula_to_sexpr(f),
                        ]));
                    }
                    println!("{}", Sexpr::List(items));
                }
            }
            if mismatches > 0 {
                Ok(EXIT_FAIL)
            } else if inconclusive > 0 {
                Ok(EXIT_INCONCLUSIVE)
            } else {
                Ok(EXIT_OK)
            }
        }
        Command::Principles {
            modality,
            size,
            format,
        } => {
            let mods: Vec<&'static dyn Modality> = match modality {
                Some(m) => vec![m.get()],
                None => all_modalities().to_vec(),
            };
            let mut failures = 0usize;
            let mut inconclusive = 0usize;
            for p in default_instances() {
                let f = principle_formula(&p).map_err(|e| usage(e))?;
                for m in &mods {
                    let r = principle_realizer(&p, *m).map_err(|e| failure(e))?;
                    let sig = instance_signature(&r.sequent_instance()).map_err(|e| usage(e))?;
                    let verdict = validate_instance(&r.sequent_instance(), &sig, size.size)?;
                    let status = match verdict {
                        EquivVerdict::Equivalent => "valid",
                        EquivVerdict::Inequivalent => {
                            failures += 1;
                            "invalid"
                        }
                        EquivVerdict::Inconclusive => {
                            inconclusive += 1;
                            "inconclusive"
                        }
                    };
                    match format {
                        Format::Human => println!(
                            "{:<12} {:<4} {:<12} {}",
                            p.kind().name(),
                            m.name(),
                            status,
                            surface::formula_to_sexpr(&f)
                        ),
                        Format::Structured => println!(
                            "{}",
                            Sexpr::list([
                                Sexpr::sym("principle"),
                                Sexpr::sym(p.kind().name()),
                                Sexpr::sym(m.name()),
                                Sexpr::sym(status),
                                surface::formula_to_sexpr(&f),
                            ])
                        ),
                    }
                }
            }
            if failures > 0 {
                Ok(EXIT_FAIL)
            } else if inconclusive > 0 {
                Ok(EXIT_INCONCLUSIVE)
            } else {
                Ok(EXIT_OK)
            }
        }
        Command::Pipeline {
            modality,
            file,
            domain_size,
            out,
        } => {
            let src = read_file(&file)?;
            let d = surface::parse_derivation(&src).map_err(|e| usage(e))?;
            check_derivation(&d, SystemId::Il).map_err(|e| failure(e))?;
            let t = translate_proof(&d).map_err(|e| failure(e))?;
            check_derivation(&t, SystemId::IllR).map_err(|e| failure(e))?;
            let r = extract(&t, modality.get(), SystemId::IllR).map_err(|e| failure(e))?;
            let report = check_extraction_wellformed(&r);
            if let Some(v) = report.violation {
                return Ok(failure(format!("extraction is not well-formed: {v}")));
            }
            let doc = surface::ExtractionDoc::from(&r);
            if out.is_some() {
                write_out(&out, &surface::extraction_to_sexpr(&doc).to_string())?;
            }
            let code = verify_doc_instance(&doc.instance(), &doc_signature(&doc)?, domain_size)?;
            if code == EXIT_OK {
                println!(
                    "pipeline ok: {} verified in all models up to size {domain_size}",
                    surface::sequent_to_sexpr(&doc.verifying)
                );
            }
            Ok(code)
        }
    }
}

fn human_extraction(doc: &surface::ExtractionDoc) -> String {
    let mut out = String::new();
    out.push_str(&format!("modality: {}\n", doc.modality));
    for (i, h) in doc.hypotheses.iter().enumerate() {
        out.push_str(&format!(
            "hypothesis {i}: {}\n",
            surface::formula_to_sexpr(&h.formula)
        ));
        out.push_str(&format!(
            "  witness vars:    {}\n",
            h.witness_vars
                .iter()
                .map(|v| format!("{} : {}", v.name, v.ty))
                .collect::<Vec<_>>()
                .join(", ")
        ));
        out.push_str(&format!(
            "  challenge terms: {}\n",
            h.challenge_terms
                .iter()
                .map(|t| surface::term_to_sexpr(t).to_string())
                .collect::<Vec<_>>()
                .join(", ")
        ));
    }
    out.push_str(&format!(
        "conclusion: {}\n",
        surface::formula_to_sexpr(&doc.conclusion.formula)
    ));
    out.push_str(&format!(
        "  witness terms:  {}\n",
        doc.conclusion
            .witness_terms
            .iter()
            .map(|t| surface::term_to_sexpr(t).to_string())
            .collect::<Vec<_>>()
            .join(", ")
    ));
    out.push_str(&format!(
        "  challenge vars: {}\n",
        doc.conclusion
            .challenge_vars
            .iter()
            .map(|v| format!("{} : {}", v.name, v.ty))
            .collect::<Vec<_>>()
            .join(", ")
    ));
    out.push_str(&format!(
        "verifying: {}",
        surface::sequent_to_sexpr(&doc.verifying)
    ));
    out
}

fn doc_signature(doc: &surface::ExtractionDoc) -> Result<Signature, u8> {
    let inst = doc.instance();
    instance_signature(&inst)
}

fn instance_signature(inst: &SequentInstance) -> Result<Signature, u8> {
    let mut formulas: Vec<&linwit_core::Formula> = inst.hyp_matrices.iter().collect();
    formulas.push(&inst.concl_matrix);
    Signature::infer(&formulas).map_err(|e| usage(e))
}

fn verify_doc_instance(
    inst: &SequentInstance,
    sig: &Signature,
    domain_size: usize,
) -> Result<u8, u8> {
    match validate_instance(inst, sig, domain_size)? {
        EquivVerdict::Equivalent => {
            println!("verified in all models up to size {domain_size}");
            Ok(EXIT_OK)
        }
        EquivVerdict::Inequivalent => Ok(failure("refuted by a finite model")),
        EquivVerdict::Inconclusive => {
            println!("inconclusive: budget exhausted");
            Ok(EXIT_INCONCLUSIVE)
        }
    }
}

fn note_sampling(sig: &Signature, domain_size: usize, sampling: &Sampling) {
    for size in 1..=domain_size {
        if let Ok(false) = linwit_core::model::exhaustive_at(sig, size, sampling) {
            println!(
                "note: atom tables at size {size} are sampled ({} draws, seed {})",
                sampling.sample_count, sampling.seed
            );
        }
    }
}

fn validate_instance(
    inst: &SequentInstance,
    sig: &Signature,
    domain_size: usize,
) -> Result<EquivVerdict, u8> {
    let mut budget = EvalBudget::standard();
    note_sampling(sig, domain_size, &Sampling::default());
    for size in 1..=domain_size {
        let all = models(sig, size, &Sampling::default()).map_err(|e| usage(e))?;
        for model in all {
            match verify_instance(inst, &model, &mut budget) {
                Ok(true) => {}
                Ok(false) => return Ok(EquivVerdict::Inequivalent),
                Err(linwit_core::model::EvalError::BudgetExceeded) => {
                    return Ok(EquivVerdict::Inconclusive)
                }
                Err(e) => return Err(usage(e)),
            }
        }
    }
    Ok(EquivVerdict::Equivalent)
}

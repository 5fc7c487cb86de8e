use std::collections::BTreeSet;
use std::fs;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fragdec_core::automata::{parse_word, Regex};
use fragdec_core::category::{
    check_path_equations, derived_category, knast_equation, parse_path_equations, PathEquation,
    PathVerdict,
};
use fragdec_core::decide::{self, DecideOptions, Witness};
use fragdec_core::logic::{
    alternation_depth, decompose_d, evaluate, letters_to_mod, mod_to_letters, normalize_moduli,
    prenex_normal_form, AlternationMode, Formula,
};
use fragdec_core::semigroup::{check_identity, IdentitySet, IdentityVerdict};
use fragdec_core::stability::StabilityRecord;
use fragdec_core::{Alphabet, Dfa, Error, EvidenceReport, Limits, SyntacticPresentation, Verdict};
use serde_json::json;

// Writes to stdout, ignoring a closed pipe.
macro_rules! out {
    ($($t:tt)*) => {{
        use std::io::Write as _;
        let _ = write!(std::io::stdout(), $($t)*);
    }};
}

macro_rules! outln {
    ($($t:tt)*) => {{
        use std::io::Write as _;
        let _ = writeln!(std::io::stdout(), $($t)*);
    }};
}

const EXIT_NOT_DEFINABLE: u8 = 1;
const EXIT_REDUCED: u8 = 2;
const EXIT_ERROR: u8 = 3;
const EXIT_GUARD: u8 = 4;
const EXIT_IO: u8 = 5;
const EXIT_USAGE: u8 = 64;

#[derive(Parser)]
#[command(
    name = "fragdec",
    version,
    about = "Definability of regular languages in logic fragments with modular predicates"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Syntactic monoid, stability index and satisfied identity sets.
    Analyze {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        common: Common,
    },
    /// Decide definability in a fragment.
    Decide {
        #[command(flatten)]
        input: Input,
        /// Fragment name, e.g. "BS1[<,MOD]" or "FO2_k[Reg]".
        #[arg(long)]
        fragment: String,
        /// Level for fragments with `_k` in their name.
        #[arg(long)]
        k: Option<u32>,
        /// Path-equation file for pluggable fragments.
        #[arg(long)]
        equations: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Emit the automaton of the enriched language L_s.
    Reduce {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        common: Common,
    },
    /// Formula evaluation and transformations.
    Formula {
        #[command(subcommand)]
        command: FormulaCommand,
    },
    /// Check identities or path equations directly.
    Check {
        #[command(subcommand)]
        command: CheckCommand,
    },
}

#[derive(Args)]
struct Input {
    /// Language as a regular expression.
    #[arg(long, group = "source")]
    regex: Option<String>,
    /// Language as a DFA file.
    #[arg(long, group = "source")]
    dfa: Option<String>,
    /// One regular expression per line; output is one JSON object per line.
    #[arg(long, group = "source")]
    batch: Option<String>,
    /// Alphabet letters for regular expressions (default: the letters used).
    #[arg(long)]
    alphabet: Option<String>,
}

#[derive(Args, Clone)]
struct Common {
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Largest syntactic monoid computed.
    #[arg(long)]
    max_monoid: Option<usize>,
    /// Largest assignment or morphism space enumerated.
    #[arg(long)]
    max_assignments: Option<u128>,
    /// Largest enriched alphabet built.
    #[arg(long)]
    max_enriched_letters: Option<usize>,
}

impl Common {
    fn limits(&self) -> Limits {
        let mut limits = Limits::default();
        if let Some(v) = self.max_monoid {
            limits.max_monoid = v;
        }
        if let Some(v) = self.max_assignments {
            limits.max_assignments = v;
        }
        if let Some(v) = self.max_enriched_letters {
            limits.max_enriched_letters = v;
        }
        limits
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct FormulaSource {
    /// File holding the formula.
    #[arg(long, group = "formula_source")]
    file: Option<String>,
    /// The formula itself.
    #[arg(long, group = "formula_source")]
    formula: Option<String>,
}

#[derive(Subcommand)]
enum FormulaCommand {
    /// Evaluate a closed formula on a word.
    Eval {
        #[command(flatten)]
        source: FormulaSource,
        /// The word; enriched letters are written a@0.
        #[arg(long)]
        word: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Apply a transformation.
    Transform {
        #[command(flatten)]
        source: FormulaSource,
        #[arg(long, value_enum)]
        op: Transform,
        /// Modulus; defaults to the lcm of the moduli in the formula.
        #[arg(long)]
        modulus: Option<u32>,
        /// Plain alphabet for mod-to-letters (default: the formula's letters).
        #[arg(long)]
        alphabet: Option<String>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Count quantifier blocks.
    Alternation {
        #[command(flatten)]
        source: FormulaSource,
        /// Count blocks along branches instead of in the prenex form.
        #[arg(long)]
        two_variable: bool,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Transform {
    Normalize,
    Decompose,
    ModToLetters,
    LettersToMod,
    Prenex,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Within {
    /// The whole syntactic monoid.
    Monoid,
    /// The images of non-empty words.
    Semigroup,
    StableMonoid,
    StableSemigroup,
}

#[derive(Subcommand)]
enum CheckCommand {
    /// Check an identity set on the syntactic monoid or one of its parts.
    Identity {
        #[command(flatten)]
        input: Input,
        /// Built-in identity set (A, ACom, Com, DA, J, J1, FO[+1]).
        #[arg(long, group = "ids")]
        identities: Option<String>,
        /// File with one identity per line.
        #[arg(long, group = "ids")]
        identities_file: Option<String>,
        #[arg(long, value_enum, default_value_t = Within::Monoid)]
        within: Within,
        #[command(flatten)]
        common: Common,
    },
    /// Check path equations on the derived category C_d.
    PathEquation {
        #[command(flatten)]
        input: Input,
        /// Equation file (default: Knast's equation).
        #[arg(long)]
        equations: Option<String>,
        /// d; defaults to the stability index.
        #[arg(long)]
        modulus: Option<u32>,
        #[command(flatten)]
        common: Common,
    },
}

/// Argument problems exit with the usage code; everything else carries a
/// library error.
enum Failure {
    Usage(String),
    Core(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure::Usage(message.into())
}

fn read(path: &str) -> Result<String, Error> {
    fs::read_to_string(path)
        .map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{path}: {e}"))))
}

fn parse_regex(text: &str, alphabet: &Option<String>) -> Result<Dfa, Error> {
    let alphabet = alphabet.as_deref().map(Alphabet::from_chars).transpose()?;
    Regex::parse(text)?.to_dfa(alphabet.as_ref())
}

impl Input {
    /// The single language, or `None` in batch mode.
    fn single(&self) -> Result<Option<Dfa>, Failure> {
        if let Some(re) = &self.regex {
            return Ok(Some(parse_regex(re, &self.alphabet)?));
        }
        if let Some(path) = &self.dfa {
            return Ok(Some(Dfa::from_text(&read(path)?)?.minimize()));
        }
        if self.batch.is_some() {
            return Ok(None);
        }
        Err(usage("give one of --regex, --dfa or --batch"))
    }
}

fn exit_code_of(verdict: Verdict) -> u8 {
    match verdict {
        Verdict::Definable | Verdict::Informational => 0,
        Verdict::NotDefinable => EXIT_NOT_DEFINABLE,
        Verdict::ReducedInstanceEmitted => EXIT_REDUCED,
    }
}

fn error_code(e: &Error) -> u8 {
    match e {
        Error::Guard { .. } => EXIT_GUARD,
        Error::Io(_) => EXIT_IO,
        _ => EXIT_ERROR,
    }
}

fn emit_report(report: &EvidenceReport, format: Format) -> u8 {
    match format {
        Format::Text => out!("{}", report.render_text()),
        Format::Json => outln!("{}", report.to_json_pretty()),
    }
    exit_code_of(report.verdict)
}

/// Runs `f` on every non-blank line of the batch file and prints one JSON
/// object per line, in input order. The exit code is the largest one seen.
fn run_batch(
    input: &Input,
    f: impl Fn(&Dfa) -> Result<EvidenceReport, Error>,
) -> Result<u8, Failure> {
    let text = read(input.batch.as_deref().expect("batch mode"))?;
    let mut code = 0;
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        match parse_regex(line, &input.alphabet).and_then(|d| f(&d)) {
            Ok(report) => {
                let mut value = serde_json::to_value(&report).expect("reports serialize");
                value["input"] = json!(line);
                outln!("{value}");
                code = code.max(exit_code_of(report.verdict));
            }
            Err(e) => {
                outln!("{}", json!({ "input": line, "error": e.to_string() }));
                code = code.max(error_code(&e));
            }
        }
    }
    Ok(code)
}

fn with_language(
    input: &Input,
    common: &Common,
    f: impl Fn(&Dfa) -> Result<EvidenceReport, Error>,
) -> Result<u8, Failure> {
    match input.single()? {
        Some(dfa) => Ok(emit_report(&f(&dfa)?, common.format)),
        None => run_batch(input, f),
    }
}

fn formula(source: &FormulaSource) -> Result<Formula, Failure> {
    match (&source.file, &source.formula) {
        (Some(path), _) => Ok(Formula::parse(&read(path)?)?),
        (_, Some(text)) => Ok(Formula::parse(text)?),
        _ => Err(usage("give --file or --formula")),
    }
}

fn print_value(format: Format, text: String, json: serde_json::Value) {
    match format {
        Format::Text => outln!("{text}"),
        Format::Json => outln!("{json}"),
    }
}

fn run_formula(command: FormulaCommand) -> Result<u8, Failure> {
    match command {
        FormulaCommand::Eval {
            source,
            word,
            format,
        } => {
            let f = formula(&source)?;
            let value = evaluate(&f, &parse_word(&word)?)?;
            print_value(format, value.to_string(), json!({ "value": value }));
        }
        FormulaCommand::Alternation {
            source,
            two_variable,
            format,
        } => {
            let f = formula(&source)?;
            let mode = if two_variable {
                AlternationMode::TwoVariable
            } else {
                AlternationMode::Prenex
            };
            let depth = alternation_depth(&f, mode)?;
            print_value(
                format,
                depth.to_string(),
                json!({ "alternation_depth": depth }),
            );
        }
        FormulaCommand::Transform {
            source,
            op,
            modulus,
            alphabet,
            format,
        } => {
            let f = formula(&source)?;
            let (lifted, lcm) = normalize_moduli(&f)?;
            let d = modulus.unwrap_or(lcm);
            let results: Vec<Formula> = match op {
                Transform::Normalize => vec![lifted],
                Transform::Prenex => vec![prenex_normal_form(&f)],
                Transform::Decompose => decompose_d(&lifted, d)?,
                Transform::LettersToMod => {
                    let d = modulus.ok_or_else(|| usage("letters-to-mod needs --modulus"))?;
                    vec![letters_to_mod(&f, d)?]
                }
                Transform::ModToLetters => {
                    let letters: String = match alphabet {
                        Some(a) => a,
                        None => {
                            let mut set = BTreeSet::new();
                            f.visit(&mut |g| {
                                if let Formula::Letter { letter, .. } = g {
                                    set.insert(letter.letter());
                                }
                            });
                            set.into_iter().collect()
                        }
                    };
                    let a = Alphabet::from_chars(&letters)?;
                    vec![mod_to_letters(&lifted, d, &a)?]
                }
            };
            let text: Vec<String> = results.iter().map(ToString::to_string).collect();
            match format {
                Format::Text => {
                    if results.len() == 1 {
                        outln!("{}", text[0]);
                    } else {
                        for (i, t) in text.iter().enumerate() {
                            outln!("{i}: {t}");
                        }
                    }
                }
                Format::Json => outln!("{}", json!({ "modulus": d, "formulas": text })),
            }
        }
    }
    Ok(0)
}

fn run_check(command: CheckCommand) -> Result<u8, Failure> {
    match command {
        CheckCommand::Identity {
            input,
            identities,
            identities_file,
            within,
            common,
        } => {
            let ids = match (identities, identities_file) {
                (Some(name), _) => IdentitySet::builtin(&name)
                    .ok_or_else(|| usage(format!("unknown identity set {name}")))?,
                (_, Some(path)) => IdentitySet::parse(&path, &read(&path)?)?,
                _ => return Err(usage("give --identities or --identities-file")),
            };
            let dfa = input
                .single()?
                .ok_or_else(|| usage("check does not support --batch"))?;
            let limits = common.limits();
            let pres = SyntacticPresentation::syntactic_morphism(&dfa, &limits)?;
            let stability = StabilityRecord::compute(&pres)?;
            let set = match within {
                Within::Monoid => pres.all(),
                Within::Semigroup => pres.semigroup_part().clone(),
                Within::StableMonoid => stability.stable_monoid().clone(),
                Within::StableSemigroup => stability.stable_semigroup().clone(),
            };
            let verdict = check_identity(&pres, &ids, Some(&set), &limits)?;
            let witness = verdict
                .witness()
                .map(|w| Witness::identity(&pres, &ids, w, None));
            emit_check(
                common.format,
                verdict == IdentityVerdict::Holds,
                witness,
                pres.size(),
            )
        }
        CheckCommand::PathEquation {
            input,
            equations,
            modulus,
            common,
        } => {
            let eqs: Vec<PathEquation> = match equations {
                Some(path) => parse_path_equations(&read(&path)?)?,
                None => vec![knast_equation()],
            };
            let dfa = input
                .single()?
                .ok_or_else(|| usage("check does not support --batch"))?;
            let limits = common.limits();
            let pres = Arc::new(SyntacticPresentation::syntactic_morphism(&dfa, &limits)?);
            let d = match modulus {
                Some(d) => d,
                None => StabilityRecord::compute(&pres)?.index() as u32,
            };
            let c = derived_category(&pres, d)?;
            let verdict = check_path_equations(&c, &eqs, &limits)?;
            let witness = match &verdict {
                PathVerdict::Fails(w) => Some(Witness::path(&format!("C_{d}"), &c, &eqs, w)),
                PathVerdict::Holds => None,
            };
            emit_check(common.format, verdict.holds(), witness, pres.size())
        }
    }
}

fn emit_check(
    format: Format,
    holds: bool,
    witness: Option<Witness>,
    size: usize,
) -> Result<u8, Failure> {
    match format {
        Format::Json => {
            outln!(
                "{}",
                serde_json::to_string_pretty(&json!({
                    "holds": holds,
                    "syntactic_monoid": size,
                    "witness": witness,
                }))
                .expect("serializes")
            );
        }
        Format::Text => {
            outln!("{}", if holds { "holds" } else { "fails" });
            if let Some(w) = witness {
                let (l, r) = w.sides();
                outln!("lhs = {}, rhs = {}", l.label, r.label);
                outln!("{}", serde_json::to_string(&w).expect("serializes"));
            }
        }
    }
    Ok(if holds { 0 } else { EXIT_NOT_DEFINABLE })
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Analyze { input, common } => {
            let limits = common.limits();
            with_language(&input, &common, |d| decide::analyze(d, &limits))
        }
        Command::Reduce { input, common } => {
            let limits = common.limits();
            with_language(&input, &common, |d| decide::reduce(d, &limits))
        }
        Command::Decide {
            input,
            fragment,
            k,
            equations,
            common,
        } => {
            let options = DecideOptions {
                k,
                equations: equations
                    .map(|path| read(&path).and_then(|t| parse_path_equations(&t)))
                    .transpose()?,
                limits: common.limits(),
            };
            with_language(&input, &common, |d| decide::decide(d, &fragment, &options))
        }
        Command::Formula { command } => run_formula(command),
        Command::Check { command } => run_check(command),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Usage(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Core(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(error_code(&e))
        }
    }
}

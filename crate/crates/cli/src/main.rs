use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use cobham_core::automata::{
    automaton_to_nd_substitution, automaton_to_substitution, nd_substitution_to_automaton, normalize_for_conversion,
    substitution_to_automaton, Automaton, RecognizableSet,
};
use cobham_core::definability::{muchnik_equivalence, semilinear_members, MembershipWindow, SemilinearSet};
use cobham_core::factor::{cobham_demo, CobhamOutcome};
use cobham_core::format::{parse_spec, print_spec, render_window, RenderFormat, Spec};
use cobham_core::nd::{spacing_and_repetitivity_check, verify_freq_array, ArrayWindow, NdSubstitution, PatternFrequencies};
use cobham_core::numeration::{decode_tuple, encode_tuple, greedy_rep, value, NumerationSystem, Representation, TupleWord};
use cobham_core::perron::{verify_theta_scaling, word_frequencies, FactorFrequencies, Frequency};
use cobham_core::recurrence::{
    complexity_with_stability, density_search, density_value, is_ultimately_periodic, multiplicatively_independent,
    return_words, Periodicity,
};
use cobham_core::substitution::{coded_prefix, Coding, Substitution};
use cobham_core::words::{Letter, Word};
use cobham_core::{BigRational, Error};

#[derive(Parser)]
#[command(name = "cobham", version, about = "Automatic sequences, substitutions and their frequencies")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Base-p (or Fibonacci) representation of a number, or of a vector as a tuple word.
    Rep {
        #[arg(required = true)]
        values: Vec<u64>,
        #[arg(long, default_value_t = 2)]
        base: u64,
        #[arg(long)]
        fibonacci: bool,
    },
    /// Value of a digit string, or of a tuple word such as `(0,1)(1,1)`.
    Val {
        text: String,
        #[arg(long, default_value_t = 2)]
        base: u64,
        #[arg(long)]
        fibonacci: bool,
    },
    /// Automaton operations.
    Aut {
        #[command(subcommand)]
        command: AutCommand,
    },
    /// Convert an automaton to a substitution with its output coding.
    Aut2sub { file: PathBuf },
    /// Convert a constant-length substitution to an automaton.
    Sub2aut {
        file: PathBuf,
        /// Letters whose states accept; defaults to the letters coded to `1`.
        #[arg(long, num_args = 1..)]
        accept: Vec<String>,
    },
    /// Prefix of the fixed point, coded when the file carries a coding.
    Fix {
        file: PathBuf,
        #[arg(long, default_value_t = 32)]
        len: usize,
        /// Print the uncoded fixed point.
        #[arg(long)]
        raw: bool,
    },
    /// Factor frequencies of one length, or of a single word.
    Freq {
        file: PathBuf,
        #[arg(long, default_value_t = 1)]
        len: usize,
        #[arg(long)]
        word: Option<String>,
    },
    /// Scaled frequency sets `{freq(u)·θ^k(|u|)}` and their stabilization.
    Thetascale {
        file: PathBuf,
        #[arg(long, default_value_t = 16)]
        max_len: usize,
    },
    /// Return words to a factor, read on a prefix of the fixed point.
    Retwords {
        file: PathBuf,
        #[arg(long)]
        word: String,
        #[arg(long, default_value_t = 100_000)]
        len: usize,
    },
    /// Factor complexity p(n) on a prefix, with agreement against its first half.
    Complexity {
        file: PathBuf,
        #[arg(long, default_value_t = 16)]
        max_len: usize,
        #[arg(long, default_value_t = 100_000)]
        len: usize,
    },
    /// Ultimate periodicity verdict on a prefix of the (coded) fixed point.
    Periodic {
        file: PathBuf,
        #[arg(long, default_value_t = 1 << 16)]
        len: usize,
    },
    /// Multiplicative independence of two bases.
    Indep { p: u64, q: u64 },
    /// Least `n + m` with `|αⁿ/βᵐ − t| < ε`.
    Density {
        alpha: f64,
        beta: f64,
        t: f64,
        eps: f64,
        #[arg(long, default_value_t = 64)]
        bound: usize,
    },
    /// Fixed array of an N^d substitution after `iter` steps.
    Ndfix {
        file: PathBuf,
        #[arg(long, default_value_t = 3)]
        iter: usize,
        #[arg(long, value_enum, default_value_t = Format::Ascii)]
        format: Format,
        #[arg(long)]
        raw: bool,
    },
    /// Exact frequencies of the R-cubes of an N^d substitution.
    Ndfreq {
        file: PathBuf,
        #[arg(long, default_value_t = 2)]
        side: usize,
    },
    /// Scaled cube frequencies and repetitivity estimates of an N^d substitution.
    Ndcheck {
        file: PathBuf,
        #[arg(long, default_value_t = 4)]
        max_side: usize,
    },
    /// Semilinear set operations.
    Semilinear {
        #[command(subcommand)]
        command: SemilinearCommand,
    },
    /// Compare a recognizable set with a semilinear set on `[0, bound)^d`.
    Muchnik {
        automaton: PathBuf,
        semilinear: PathBuf,
        #[arg(long, default_value_t = 64)]
        bound: usize,
    },
    /// Compare two generators of one sequence and check what their bases predict.
    CobhamDemo {
        first: PathBuf,
        second: PathBuf,
        #[arg(long, default_value_t = 12)]
        max_len: usize,
    },
    /// Render a 2-dimensional fixed array as PGM or text.
    Render {
        file: PathBuf,
        #[arg(long, default_value_t = 3)]
        iter: usize,
        #[arg(long, value_enum, default_value_t = Format::Pgm)]
        format: Format,
        #[arg(long)]
        raw: bool,
    },
}

#[derive(Subcommand)]
enum AutCommand {
    /// Run on the representation of a number or vector.
    Run {
        file: PathBuf,
        #[arg(required = true)]
        values: Vec<u64>,
    },
    /// Members below a bound, one per line.
    Enum {
        file: PathBuf,
        #[arg(long, default_value_t = 64)]
        bound: u64,
    },
    /// Add a fresh initial state when needed so that conversion applies.
    Normalize { file: PathBuf },
}

#[derive(Subcommand)]
enum SemilinearCommand {
    /// Members in `[0, bound)^d`, one per line.
    Enum {
        file: PathBuf,
        #[arg(long, default_value_t = 16)]
        bound: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Pgm,
    Ascii,
}

enum Failure {
    Usage(String),
    Core(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        Failure::Core(e)
    }
}

type Outcome = std::result::Result<String, Failure>;

fn read(path: &Path) -> std::result::Result<Spec, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    Ok(parse_spec(&text)?)
}

fn wrong_kind(path: &Path, spec: &Spec, wanted: &str) -> Failure {
    Failure::Usage(format!("{}: expected {wanted}, found {}", path.display(), spec.kind()))
}

fn automaton(path: &Path) -> std::result::Result<Automaton, Failure> {
    match read(path)? {
        Spec::Automaton(a) => Ok(a),
        other => Err(wrong_kind(path, &other, "an automaton")),
    }
}

fn substitution(path: &Path) -> std::result::Result<(Substitution, Option<Coding>), Failure> {
    match read(path)? {
        Spec::Substitution { substitution, coding } => Ok((substitution, coding)),
        Spec::Automaton(a) if a.dim() == 1 => {
            let (s, c) = automaton_to_substitution(&normalize_for_conversion(&a))?;
            Ok((s, Some(c)))
        }
        other => Err(wrong_kind(path, &other, "a substitution")),
    }
}

fn nd_substitution(path: &Path) -> std::result::Result<(NdSubstitution, Option<Coding>), Failure> {
    match read(path)? {
        Spec::NdSubstitution { substitution, coding } => Ok((substitution, coding)),
        Spec::Automaton(a) => {
            let (s, c) = automaton_to_nd_substitution(&normalize_for_conversion(&a))?;
            Ok((s, Some(c)))
        }
        other => Err(wrong_kind(path, &other, "an N^d substitution")),
    }
}

fn semilinear(path: &Path) -> std::result::Result<SemilinearSet, Failure> {
    match read(path)? {
        Spec::Semilinear(s) => Ok(s),
        other => Err(wrong_kind(path, &other, "a semilinear set")),
    }
}

fn show_frequency(f: &Frequency) -> String {
    match &f.exact {
        Some(x) => x.to_string(),
        None => format!("{:.12}", f.value),
    }
}

fn show_vector(v: &[usize]) -> String {
    if v.len() == 1 {
        return v[0].to_string();
    }
    let parts: Vec<String> = v.iter().map(usize::to_string).collect();
    format!("({})", parts.join(","))
}

fn show_set(set: &BTreeSet<BigRational>) -> String {
    set.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

fn system(base: u64, fibonacci: bool) -> std::result::Result<NumerationSystem, Failure> {
    Ok(if fibonacci { NumerationSystem::fibonacci() } else { NumerationSystem::base(base)? })
}

fn coded_window(w: ArrayWindow, coding: Option<&Coding>) -> cobham_core::Result<ArrayWindow> {
    match coding {
        Some(c) => {
            let cells = w.cells().iter().map(|&l| c.map(l)).collect();
            ArrayWindow::new(c.target().clone(), w.shape().to_vec(), cells)
        }
        None => Ok(w),
    }
}

fn run(cmd: Command) -> Outcome {
    let mut out = String::new();
    match cmd {
        Command::Rep { values, base, fibonacci } => {
            if values.len() == 1 {
                out = greedy_rep(&system(base, fibonacci)?, values[0])?.to_string();
            } else {
                if fibonacci {
                    return Err(Failure::Usage("vectors are encoded in base p only".into()));
                }
                out = encode_tuple(base, &values)?.to_string();
            }
        }
        Command::Val { text, base, fibonacci } => {
            if text.trim_start().starts_with('(') {
                let t = TupleWord::parse(&text)?;
                let v: Vec<usize> = decode_tuple(base, &t)?.into_iter().map(|c| c as usize).collect();
                out = show_vector(&v);
            } else {
                out = value(&system(base, fibonacci)?, &Representation::parse(&text)?)?.to_string();
            }
        }
        Command::Aut { command } => match command {
            AutCommand::Run { file, values } => {
                let a = automaton(&file)?;
                let q = a.run_vector(&values)?;
                let verdict = if a.is_terminal(q) { "accept" } else { "reject" };
                out = format!("{verdict} {}", a.states()[q]);
            }
            AutCommand::Enum { file, bound } => {
                let set = RecognizableSet::new(automaton(&file)?)?;
                let lines: Vec<String> = set
                    .enumerate(bound)?
                    .into_iter()
                    .map(|v| show_vector(&v.into_iter().map(|c| c as usize).collect::<Vec<_>>()))
                    .collect();
                out = lines.join("\n");
            }
            AutCommand::Normalize { file } => {
                out = print_spec(&Spec::Automaton(normalize_for_conversion(&automaton(&file)?)));
            }
        },
        Command::Aut2sub { file } => {
            let a = normalize_for_conversion(&automaton(&file)?);
            let spec = if a.dim() == 1 {
                let (s, c) = automaton_to_substitution(&a)?;
                Spec::Substitution { substitution: s, coding: Some(c) }
            } else {
                let (s, c) = automaton_to_nd_substitution(&a)?;
                Spec::NdSubstitution { substitution: s, coding: Some(c) }
            };
            out = print_spec(&spec);
        }
        Command::Sub2aut { file, accept } => {
            let spec = read(&file)?;
            let (alphabet, coding) = match &spec {
                Spec::Substitution { substitution, coding } => (substitution.alphabet().clone(), coding.clone()),
                Spec::NdSubstitution { substitution, coding } => (substitution.alphabet().clone(), coding.clone()),
                other => return Err(wrong_kind(&file, other, "a substitution")),
            };
            let outputs: Vec<Letter> = if accept.is_empty() {
                let c = coding.ok_or_else(|| Failure::Usage("no coding in the file; pass --accept".into()))?;
                alphabet.letters().filter(|&l| c.target().symbol(c.map(l)) == "1").collect()
            } else {
                accept.iter().map(|s| alphabet.letter(s)).collect::<cobham_core::Result<_>>()?
            };
            let a = match &spec {
                Spec::Substitution { substitution, .. } => substitution_to_automaton(substitution, &outputs)?,
                Spec::NdSubstitution { substitution, .. } => nd_substitution_to_automaton(substitution, &outputs)?,
                _ => unreachable!("kind checked above"),
            };
            out = print_spec(&Spec::Automaton(a));
        }
        Command::Fix { file, len, raw } => {
            let (s, c) = substitution(&file)?;
            out = match (c, raw) {
                (Some(c), false) => coded_prefix(&s, &c, len)?.to_string(),
                _ => s.fixed_point_prefix(len)?.to_string(),
            };
        }
        Command::Freq { file, len, word } => {
            let (s, _) = substitution(&file)?;
            match word {
                Some(w) => {
                    let u = Word::parse(s.alphabet().clone(), &w)?;
                    let ff = FactorFrequencies::new(&s, u.len().max(1))?;
                    out = show_frequency(&ff.frequency(u.letters())?);
                }
                None => {
                    let table = word_frequencies(&s, len)?;
                    let lines: Vec<String> =
                        table.entries.iter().map(|(w, f)| format!("{w} {}", show_frequency(f))).collect();
                    out = lines.join("\n");
                }
            }
        }
        Command::Thetascale { file, max_len } => {
            let (s, _) = substitution(&file)?;
            let r = verify_theta_scaling(&s, max_len)?;
            let _ = writeln!(out, "theta {}", r.theta);
            for l in &r.per_length {
                let _ = writeln!(out, "n {} k {} values {}", l.length, l.k, show_set(&l.values));
            }
            let _ = writeln!(out, "set {}", show_set(&r.set_up_to(max_len)));
            let _ = writeln!(out, "cardinality {}", r.cardinality());
            let _ = write!(out, "stabilized {}\nperiodic {}", r.stabilized(), r.periodic);
        }
        Command::Retwords { file, word, len } => {
            let (s, _) = substitution(&file)?;
            let x = s.fixed_point_prefix(len)?;
            let u = Word::parse(s.alphabet().clone(), &word)?;
            let r = return_words(&x, &u)?;
            for w in &r.return_words {
                let _ = writeln!(out, "{w}");
            }
            let _ = write!(out, "occurrences {}\nmax_gap {}", r.positions.len(), r.max_gap);
        }
        Command::Complexity { file, max_len, len } => {
            let (s, _) = substitution(&file)?;
            let x = s.fixed_point_prefix(len)?;
            let lines: Vec<String> = (1..=max_len)
                .map(|n| {
                    let (p, stable) = complexity_with_stability(&x, n);
                    format!("{n} {p}{}", if stable { "" } else { " unstable" })
                })
                .collect();
            out = lines.join("\n");
        }
        Command::Periodic { file, len } => {
            let (s, c) = substitution(&file)?;
            let w = match c {
                Some(c) => coded_prefix(&s, &c, len)?,
                None => s.fixed_point_prefix(len)?,
            };
            out = match is_ultimately_periodic(&w) {
                Periodicity::Periodic { period, preperiod, certified } => {
                    format!("PERIODIC period {period} preperiod {preperiod} certified {certified}")
                }
                Periodicity::NonPeriodic { n, complexity } => format!("NON-PERIODIC p({n}) = {complexity} > {n}"),
                Periodicity::Inconclusive => "INCONCLUSIVE".into(),
            };
        }
        Command::Indep { p, q } => {
            let r = multiplicatively_independent(p, q)?;
            out = match r.witness {
                Some((k, l)) => format!("dependent {p}^{k} = {q}^{l}"),
                None => "independent".into(),
            };
        }
        Command::Density { alpha, beta, t, eps, bound } => {
            let (n, m) = density_search(alpha, beta, t, eps, bound)?;
            out = format!("{n} {m} {}", density_value(alpha, beta, n, m));
        }
        Command::Ndfix { file, iter, format, raw } | Command::Render { file, iter, format, raw } => {
            let (s, c) = nd_substitution(&file)?;
            let w = s.fixed_array(iter)?;
            let w = if raw { w } else { coded_window(w, c.as_ref())? };
            let f = match format {
                Format::Pgm => RenderFormat::Pgm,
                Format::Ascii => RenderFormat::Ascii,
            };
            out = if w.dim() == 2 { render_window(&w, f)? } else { format!("{w}") };
        }
        Command::Ndfreq { file, side } => {
            let (s, _) = nd_substitution(&file)?;
            let pf = PatternFrequencies::new(&s)?;
            let mut lines = Vec::new();
            for p in pf.cubic_patterns(side)? {
                let f = pf.frequency(&cobham_core::nd::Pattern::from_window(&p))?;
                let cells = format!("{p}").trim_end().replace('\n', "/");
                lines.push(format!("{cells} {f}"));
            }
            out = lines.join("\n");
        }
        Command::Ndcheck { file, max_side } => {
            let (s, _) = nd_substitution(&file)?;
            let f = verify_freq_array(&s, max_side)?;
            let _ = writeln!(out, "theta {}", f.theta);
            for c in &f.per_side {
                let _ = writeln!(out, "R {} k {} values {}", c.side, c.k, show_set(&c.values));
            }
            let _ = writeln!(out, "cardinality {}", f.cardinality());
            let _ = writeln!(out, "stabilized {}", f.stabilized());
            let sp = spacing_and_repetitivity_check(&s, max_side)?;
            for a in &sp.per_side {
                let _ = writeln!(out, "R {} window {} spacing {} patterns {}", a.side, a.window_needed, a.min_distance, a.patterns);
            }
            let _ = write!(
                out,
                "K {:.4}\nK' {:.4}\nstable {}\nverified {}\nperiodic {}",
                sp.k_hat, sp.k_prime_hat, sp.stable, sp.verified, sp.periodic || f.periodic
            );
        }
        Command::Semilinear { command: SemilinearCommand::Enum { file, bound } } => {
            let sl = semilinear(&file)?;
            let lines: Vec<String> = semilinear_members(&sl, bound)?.iter().map(|v| show_vector(v)).collect();
            out = lines.join("\n");
        }
        Command::Muchnik { automaton: a, semilinear: s, bound } => {
            let set = RecognizableSet::new(automaton(&a)?)?;
            let sl = semilinear(&s)?;
            let w = MembershipWindow::from_recognizable(&set, bound)?;
            let v = muchnik_equivalence(&w, &sl, bound)?;
            if v.equal() {
                out = format!("EQUAL up to {bound}");
            } else {
                let show = |p: &Option<Vec<usize>>| p.as_ref().map_or("none".to_string(), |v| show_vector(v));
                out = format!(
                    "DISCREPANCY up to {bound}\nin automaton only: {}\nin semilinear set only: {}",
                    show(&v.window_only),
                    show(&v.set_only)
                );
            }
        }
        Command::CobhamDemo { first, second, max_len } => {
            let (s1, c1) = substitution(&first)?;
            let (s2, c2) = substitution(&second)?;
            let c1 = c1.unwrap_or_else(|| Coding::identity(s1.alphabet().clone()));
            let c2 = c2.unwrap_or_else(|| Coding::identity(s2.alphabet().clone()));
            let r = cobham_demo(&s1, &c1, &s2, &c2, max_len)?;
            let _ = writeln!(out, "bases {} {}", r.p, r.q);
            let _ = writeln!(out, "agreement {} letters", r.agreement_len);
            match r.independence.witness {
                Some((k, l)) => {
                    let _ = writeln!(out, "dependent {}^{k} = {}^{l}", r.p, r.q);
                }
                None => {
                    let _ = writeln!(out, "independent");
                }
            }
            match r.outcome {
                CobhamOutcome::Periodic { period, preperiod, certified } => {
                    let _ = write!(out, "PERIODIC period {period} preperiod {preperiod} certified {certified}");
                }
                CobhamOutcome::CounterexampleCandidate { verdict, note } => {
                    let _ = write!(out, "COUNTEREXAMPLE CANDIDATE {verdict:?}\n{note}");
                }
                CobhamOutcome::Dependent(ev) => {
                    let _ = writeln!(out, "frequencies agree {}", ev.frequencies_agree);
                    let _ = writeln!(out, "scaled by p: {}", show_set(&ev.scaled_p));
                    let _ = writeln!(out, "scaled by q: {}", show_set(&ev.scaled_q));
                    match ev.witness {
                        Some(w) => {
                            let _ = write!(
                                out,
                                "witness {} {} {}^{} = {}^{} {}",
                                w.short, w.long, r.p, w.p_exponent, r.q, w.q_exponent, ev.witness_consistent
                            );
                        }
                        None => {
                            let _ = write!(out, "witness none up to length {max_len}");
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(text) => {
            if text.ends_with('\n') {
                print!("{text}");
            } else {
                println!("{text}");
            }
            ExitCode::SUCCESS
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Core(e)) => {
            let code = match &e {
                Error::Parse { .. } => {
                    eprintln!("error: {e}");
                    3
                }
                e if e.is_validation() => {
                    eprintln!("invalid input: {e}");
                    4
                }
                e => {
                    eprintln!("internal error: {e}");
                    5
                }
            };
            ExitCode::from(code)
        }
    }
}

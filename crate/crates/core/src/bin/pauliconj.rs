use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use pauliconj::circuit::Circuit;
use pauliconj::coding::{wt_eval_real, BinaryCode, OneRemainderMatrix, DEFAULT_RANK_BOUND};
use pauliconj::decision::{
    conjugate_value_by_oracle, decide_commute_by_oracle, decide_commute_with, decide_enic_by_oracle, decide_enic_with,
    decide_support_with, conjugate_value_with, DecisionOptions, DecisionResult,
};
use pauliconj::exactnum::{ExactScalar, RealRoot2};
use pauliconj::f2core::{F2Matrix, SymplecticVec};
use pauliconj::oracle::{dense, dense_pc, equal_up_to_phase, pauli_expansion};
use pauliconj::pauli::PhasedPauli;
use pauliconj::presentation::{decode, encode, expand, Presentation};
use pauliconj::reductions::{binary_weight_to_circuit, code_embedding_circuit, support_to_enic, teleport_correction};
use pauliconj::Error;

const EXIT_FALSE: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_BUDGET: u8 = 3;

#[derive(Parser)]
#[command(name = "pauliconj", version, about = "Pauli conjugation by Clifford+T circuits")]
struct Cli {
    /// Cap on branches enumerated by the coefficient engine.
    #[arg(long, global = true, default_value_t = 1 << 22)]
    max_chains: u64,
    /// Largest register the dense oracle may simulate.
    #[arg(long, global = true, default_value_t = 8)]
    max_qubits_oracle: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Qubit count, gate count, T-count and T-depth.
    Stats { circuit: PathBuf },
    /// Pauli expansion of C P^x C†.
    Conjugate(CircuitPauli),
    /// Depth-d presentation of C P^x C†.
    Encode {
        #[command(flatten)]
        input: CircuitPauli,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Circuit C with C P^z C† equal to the presented operator.
    Decode {
        presentation: PathBuf,
        #[arg(long)]
        pauli: String,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Decide ENIC, COMMUTE or SUPPORT.
    #[command(subcommand)]
    Decide(Decide),
    /// Build a reduction instance and its certificate.
    #[command(subcommand)]
    Reduce(Reduce),
    /// Weight data of a binary code given by its generator.
    #[command(subcommand)]
    Code(CodeCmd),
    /// Cross-check every engine against the dense oracle.
    Verify(CircuitPauli),
}

#[derive(Args)]
struct CircuitPauli {
    circuit: PathBuf,
    /// Dense ("XZI"), sparse ("Z1X3") or bit ("zbits|xbits") form.
    #[arg(long)]
    pauli: String,
}

#[derive(Subcommand)]
enum Decide {
    /// Is C not the identity up to global phase?
    Enic {
        circuit: PathBuf,
        /// Exit with status 1 on a no-instance.
        #[arg(long)]
        exit_status: bool,
    },
    /// Does C P^x C† equal P^x?
    Commute {
        #[command(flatten)]
        input: CircuitPauli,
        /// Exit with status 1 on a no-instance.
        #[arg(long)]
        exit_status: bool,
    },
    /// Does P^x appear in C P^x C†?
    Support {
        #[command(flatten)]
        input: CircuitPauli,
        /// Exit with status 1 on a no-instance.
        #[arg(long)]
        exit_status: bool,
    },
}

#[derive(Args)]
struct Emit {
    /// Circuit output; stdout when absent.
    #[arg(short, long)]
    out: Option<PathBuf>,
    /// Certificate output; appended to stdout when absent.
    #[arg(long)]
    cert: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Reduce {
    /// Circuit that is the identity on its data exactly when the coefficient of P^x in C vanishes.
    SupportToEnic {
        #[command(flatten)]
        input: CircuitPauli,
        #[command(flatten)]
        emit: Emit,
    },
    /// Circuit whose Z₁ coefficient vanishes exactly when no codeword has weight t.
    BinaryWeight {
        code: PathBuf,
        #[arg(long)]
        t: usize,
        #[command(flatten)]
        emit: Emit,
    },
    /// T-depth-3 circuit whose Z₁ coefficient is wt_V(1/√2)/(2^{n/2}√|V|).
    CodeEmbed {
        code: PathBuf,
        #[command(flatten)]
        emit: Emit,
    },
}

#[derive(Subcommand)]
enum CodeCmd {
    /// wt_V(1/√2).
    Wt { code: PathBuf },
    /// Number of codewords of each weight.
    Distribution { code: PathBuf },
}

enum Failure {
    Usage(String),
    Budget(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Budget(m) => Failure::Budget(m),
            Error::OracleBound(..) => Failure::Budget(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

type Outcome = Result<u8, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn write_or_print(path: Option<&PathBuf>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Usage(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_circuit(path: &Path) -> Result<Circuit, Failure> {
    Ok(Circuit::parse(&read(path)?)?)
}

fn load_pauli(text: &str, n: usize) -> Result<SymplecticVec, Failure> {
    let p = PhasedPauli::parse(text, Some(n))?;
    if p.phase != 0 {
        return Err(Failure::Usage("the Pauli index takes no phase".into()));
    }
    Ok(p.v)
}

fn load_input(i: &CircuitPauli) -> Result<(Circuit, SymplecticVec), Failure> {
    let c = load_circuit(&i.circuit)?;
    let x = load_pauli(&i.pauli, c.qubits())?;
    Ok((c, x))
}

fn load_code(path: &Path) -> Result<F2Matrix, Failure> {
    Ok(F2Matrix::parse(&read(path)?)?)
}

fn load_one_remainder(path: &Path) -> Result<OneRemainderMatrix, Failure> {
    let g = load_code(path)?;
    OneRemainderMatrix::validate(&g).ok_or_else(|| Failure::Usage("the generator is not a 1-remainder matrix".into()))
}

fn fmt_scalar(s: &ExactScalar) -> String {
    match s.to_real_root2() {
        Ok(r) => r.to_string(),
        Err(_) => s.to_string(),
    }
}

/// Terms in lexicographic order of their "z|x" bit strings.
fn print_expansion<'a>(terms: impl IntoIterator<Item = (&'a SymplecticVec, &'a ExactScalar)>) {
    let mut rows: Vec<(String, String, String)> =
        terms.into_iter().map(|(v, c)| (format!("{}|{}", v.z, v.x), v.letters(), fmt_scalar(c))).collect();
    rows.sort();
    for (_, letters, c) in rows {
        println!("{letters} {c}");
    }
}

fn report(r: &DecisionResult, exit_status: bool) -> u8 {
    let yes = r.truth();
    println!("{}", if yes { "yes-instance" } else { "no-instance" });
    println!("method {}", r.method);
    println!("t-depth {}", r.resources.t_depth);
    if exit_status && !yes {
        EXIT_FALSE
    } else {
        0
    }
}

fn emit(e: &Emit, circuit: &Circuit, cert: &str) -> Result<(), Failure> {
    write_or_print(e.out.as_ref(), &circuit.to_text())?;
    write_or_print(e.cert.as_ref(), cert)
}

fn run(cli: Cli) -> Outcome {
    let opts = DecisionOptions { max_chains: cli.max_chains };
    match cli.command {
        Command::Stats { circuit } => {
            let c = load_circuit(&circuit)?;
            println!("qubits {}", c.qubits());
            println!("gates {}", c.len());
            println!("t-count {}", c.t_count());
            println!("t-depth {}", c.t_depth());
            Ok(0)
        }
        Command::Conjugate(input) => {
            let (c, x) = load_input(&input)?;
            let terms = expand(&encode(&c, &x)?, cli.max_chains)?;
            print_expansion(terms.iter());
            Ok(0)
        }
        Command::Encode { input, out } => {
            let (c, x) = load_input(&input)?;
            write_or_print(out.as_ref(), &encode(&c, &x)?.to_text())?;
            Ok(0)
        }
        Command::Decode { presentation, pauli, out } => {
            let p = Presentation::parse(&read(&presentation)?)?;
            let z = load_pauli(&pauli, p.n())?;
            write_or_print(out.as_ref(), &decode(&p, &z)?.to_text())?;
            Ok(0)
        }
        Command::Decide(d) => match d {
            Decide::Enic { circuit, exit_status } => {
                let c = load_circuit(&circuit)?;
                Ok(report(&decide_enic_with(&c, &opts)?, exit_status))
            }
            Decide::Commute { input, exit_status } => {
                let (c, x) = load_input(&input)?;
                Ok(report(&decide_commute_with(&c, &x, &opts)?, exit_status))
            }
            Decide::Support { input, exit_status } => {
                let (c, x) = load_input(&input)?;
                Ok(report(&decide_support_with(&c, &x, &opts)?, exit_status))
            }
        },
        Command::Reduce(r) => match r {
            Reduce::SupportToEnic { input, emit: e } => {
                let (c, z) = load_input(&input)?;
                let f = support_to_enic(&c, &z)?;
                let cert = format!(
                    "certificate support-to-enic\nsource support n={} z={}\nqubits {}\nt-depth {}\nnote ancillas {} start in |0>\n",
                    c.qubits(),
                    z.letters(),
                    f.circuit.qubits(),
                    f.circuit.t_depth(),
                    f.ancillas()
                );
                emit(&e, &f.circuit, &cert)?;
                Ok(0)
            }
            Reduce::BinaryWeight { code, t, emit: e } => {
                let g = load_one_remainder(&code)?;
                let (f, cert) = binary_weight_to_circuit(&g, t)?;
                emit(&e, &f, &cert.to_text())?;
                Ok(0)
            }
            Reduce::CodeEmbed { code, emit: e } => {
                let g = load_one_remainder(&code)?;
                let (f, cert) = code_embedding_circuit(&g)?;
                emit(&e, &f, &cert.to_text())?;
                Ok(0)
            }
        },
        Command::Code(cmd) => match cmd {
            CodeCmd::Wt { code } => {
                let v = BinaryCode::new(load_code(&code)?);
                let d = v.weight_distribution(DEFAULT_RANK_BOUND)?;
                println!("{}", wt_eval_real(&d, &RealRoot2::inv_sqrt2()));
                Ok(0)
            }
            CodeCmd::Distribution { code } => {
                let v = BinaryCode::new(load_code(&code)?);
                let d = v.weight_distribution(DEFAULT_RANK_BOUND)?;
                println!("{}", d.iter().map(u64::to_string).collect::<Vec<_>>().join(" "));
                Ok(0)
            }
        },
        Command::Verify(input) => {
            let (c, x) = load_input(&input)?;
            if c.qubits() > cli.max_qubits_oracle {
                return Err(Failure::Budget(format!("{} qubits exceeds --max-qubits-oracle {}", c.qubits(), cli.max_qubits_oracle)));
            }
            verify(&c, &x, &opts)
        }
    }
}

fn verify(c: &Circuit, x: &SymplecticVec, opts: &DecisionOptions) -> Outcome {
    let mut failed = 0;
    let mut check = |name: &str, ok: bool| {
        println!("{} {name}", if ok { "ok  " } else { "FAIL" });
        if !ok {
            failed += 1;
        }
    };
    let target = dense_pc(c, x)?;
    let p = encode(c, x)?;
    check("presentation depth equals T-depth", p.depth() == c.t_depth());
    if c.qubits() <= 7 {
        let engine = expand(&p, opts.max_chains)?;
        let oracle = pauli_expansion(&target)?;
        check("pauli expansion matches oracle", engine.into_iter().collect::<Vec<_>>() == oracle.into_iter().collect::<Vec<_>>());
    }
    let d = decode(&p, x)?;
    check("decode reproduces the operator", dense_pc(&d, x)? == target);
    check("enic matches oracle", decide_enic_with(c, opts)?.truth() == decide_enic_by_oracle(c)?.truth());
    check("commute matches oracle", decide_commute_with(c, x, opts)?.truth() == decide_commute_by_oracle(c, x)?.truth());
    check("conjugate matches oracle", conjugate_value_with(c, x, opts)?.answer == conjugate_value_by_oracle(c, x)?.answer);
    if c.t_depth() <= 1 {
        let corr = teleport_correction(c, x)?;
        check("teleport correction matches oracle", equal_up_to_phase(&dense(&corr)?, &target)?.is_some());
    }
    Ok(if failed == 0 { 0 } else { EXIT_FALSE })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Budget(m)) => {
            eprintln!("budget exceeded: {m}");
            ExitCode::from(EXIT_BUDGET)
        }
    }
}

//! `asso`: drives every protocol role against files on disk.

mod files;
mod inspect;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use asso::algebra::{seeded_rng, setup_params, G1, G2};
use asso::bench::run_bench;
use asso::credentials::Role;
use asso::protocol::{
    check_ticket, cv_trace, issuer_issue_ticket, register, user_build_ticket_request, user_show_tag,
    user_trace_request, verifier_validate, FixedText, Registry, RegistryRecord, ServiceSet, SpendLedger, TraceFailure,
    UserTicket, Verdict,
};
use asso::transport::{Encode, MessageType};
use asso::Error;
use clap::{Parser, Subcommand, ValueEnum};
use rand::rngs::OsRng;
use rand::{CryptoRng, RngCore};
use serde_json::json;

use files::Out;

#[derive(Parser)]
#[command(name = "asso", version, about = "Anonymous single sign-on with designated verifiers")]
struct Cli {
    /// Write output files as base64 JSON instead of raw envelopes.
    #[arg(long, global = true)]
    armor: bool,
    /// Seed for deterministic randomness (fixtures only).
    #[arg(long, global = true)]
    seed: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Profile {
    Default,
    Compat160,
    Compat320,
}

impl Profile {
    fn security_bits(self) -> u32 {
        match self {
            Profile::Default => 128,
            Profile::Compat160 => 160,
            Profile::Compat320 => 320,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// CA set-up: public parameters and the master secret.
    Setup {
        #[arg(long, default_value = "params.bin")]
        out: PathBuf,
        /// Where to write the CA master secret (default: ca.keys next to --out).
        #[arg(long)]
        keys: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "default")]
        profile: Profile,
    },
    /// Register an entity with the CA and record it in the registry.
    Register {
        #[arg(long)]
        role: Role,
        /// Identifier (default: I, CV, or the role name).
        #[arg(long)]
        id: Option<String>,
        #[arg(long, default_value = "params.bin")]
        params: PathBuf,
        /// CA master secret.
        #[arg(long, default_value = "ca.keys")]
        keys: PathBuf,
        #[arg(long, default_value = "registry.log")]
        registry: PathBuf,
        /// Entity key file (default: <id>.keys); the public record goes to <id>.pub.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Request a ticket for a set of verifiers, have the issuer sign it, and check it.
    Issue {
        /// User key file.
        #[arg(long)]
        keys: PathBuf,
        #[arg(long)]
        issuer_keys: PathBuf,
        /// Ordinary verifier identifiers.
        #[arg(long, value_delimiter = ',', required = true)]
        services: Vec<String>,
        /// Central verifier identifier (default: the first one registered).
        #[arg(long)]
        central: Option<String>,
        #[arg(long, default_value = "")]
        text: String,
        #[arg(long, default_value = "params.bin")]
        params: PathBuf,
        #[arg(long, default_value = "registry.log")]
        registry: PathBuf,
        #[arg(long, default_value = "ticket.bin")]
        out: PathBuf,
    },
    /// Present one tag from a ticket, or build a trace request for the central verifier.
    Show {
        /// User key file.
        #[arg(long)]
        keys: PathBuf,
        #[arg(long, default_value = "ticket.bin")]
        ticket: PathBuf,
        #[arg(long, required_unless_present = "trace")]
        verifier: Option<String>,
        /// Write a trace request instead of a showing.
        #[arg(long)]
        trace: bool,
        #[arg(long, default_value = "params.bin")]
        params: PathBuf,
        #[arg(long, default_value = "registry.log")]
        registry: PathBuf,
        /// Output file (default: showing.bin, or trace.bin with --trace).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Validate a showing as a verifier, recording it in the spend ledger.
    Validate {
        /// Verifier key file.
        #[arg(long)]
        keys: PathBuf,
        #[arg(long, default_value = "showing.bin")]
        showing: PathBuf,
        /// Spend ledger (default: ledger.<id>.log next to the registry).
        #[arg(long)]
        ledger: Option<PathBuf>,
        #[arg(long)]
        issuer: Option<String>,
        #[arg(long)]
        central: Option<String>,
        #[arg(long, default_value = "params.bin")]
        params: PathBuf,
        #[arg(long, default_value = "registry.log")]
        registry: PathBuf,
    },
    /// Trace a ticket as the central verifier.
    Trace {
        /// Central verifier key file.
        #[arg(long)]
        keys: PathBuf,
        #[arg(long, default_value = "trace.bin")]
        request: PathBuf,
        #[arg(long)]
        issuer: Option<String>,
        #[arg(long, default_value = "params.bin")]
        params: PathBuf,
        #[arg(long, default_value = "registry.log")]
        registry: PathBuf,
        /// Also write the report as JSON.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Time every protocol phase.
    Bench {
        #[arg(long, default_value_t = 10)]
        iterations: usize,
        /// Ordinary verifier counts; the central verifier is added to each.
        #[arg(long, value_delimiter = ',', default_value = "2,3")]
        verifiers: Vec<usize>,
        #[arg(long, value_enum, default_value = "default")]
        profile: Profile,
        #[arg(long, default_value = "bench.json")]
        out: PathBuf,
    },
    /// Pretty-print any envelope or log file.
    Inspect { file: PathBuf },
}

/// How a command ended, other than success.
enum Failure {
    Error(Error),
    Reject(&'static str),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Error(e)
    }
}

fn trace_class(f: TraceFailure) -> &'static str {
    match f {
        TraceFailure::NotCentralVerifier => "NotCentralVerifier",
        TraceFailure::NotContained => "NotContained",
        TraceFailure::TagInvalid(r) => r.name(),
        TraceFailure::UnknownVerifierKey(_) => "UnknownVerifierKey",
        TraceFailure::EntrySerial(_) => "EntrySerial",
        TraceFailure::EntrySignature(_) => "EntrySignature",
        TraceFailure::InconsistentUser(_) => "InconsistentUser",
        TraceFailure::ClosureSerial => "ClosureSerial",
        TraceFailure::ClosureSignature => "ClosureSignature",
    }
}

fn role_key<'a>(reg: &'a Registry, id: Option<&str>, role: Role) -> Result<&'a RegistryRecord, Error> {
    let rec = match id {
        Some(id) => reg.get(id).ok_or_else(|| Error::UnknownVerifier(id.to_string()))?,
        None => reg.first_with_role(role).ok_or(Error::MissingRole(role))?,
    };
    if rec.role != role {
        return Err(Error::MissingRole(role));
    }
    Ok(rec)
}

fn issuer_g2(reg: &Registry, id: Option<&str>) -> Result<G2, Error> {
    role_key(reg, id, Role::Issuer)?.public_g2.ok_or(Error::MissingG2Key(Role::Issuer))
}

fn central_key(reg: &Registry, id: Option<&str>) -> Result<(String, G1), Error> {
    let rec = role_key(reg, id, Role::CentralVerifier)?;
    Ok((rec.id.clone(), rec.public))
}

fn hx<T: Encode + ?Sized>(x: &T) -> String {
    hex::encode(x.encode_to_vec())
}

fn default_id(role: Role) -> String {
    match role {
        Role::Issuer => "I".into(),
        Role::CentralVerifier => "CV".into(),
        other => other.name().into(),
    }
}

fn run(cli: Cli, rng: &mut (impl RngCore + CryptoRng)) -> Result<(), Failure> {
    let out = Out { armor: cli.armor };
    match cli.command {
        Command::Setup { out: path, keys, profile } => {
            let (msk, pp) = setup_params(profile.security_bits(), rng)?;
            let keys = keys.unwrap_or_else(|| files::sibling(&path, "ca.keys"));
            out.write(&path, MessageType::PublicParams, &pp)?;
            out.write(&keys, MessageType::MasterSecret, &msk)?;
            println!("params {} ({}), master secret {}", path.display(), pp.curve.name(), keys.display());
        }
        Command::Register { role, id, params, keys, registry, out: path } => {
            let pp = files::params(&params)?;
            let msk = files::read(&keys, MessageType::MasterSecret)?;
            let id = id.unwrap_or_else(|| default_id(role));
            let mut reg = Registry::open(&registry)?;
            let entity = register(&pp, &msk, &mut reg, role, &id, rng)?;
            let path = path.unwrap_or_else(|| files::sibling(&registry, &format!("{id}.keys")));
            out.write(&path, MessageType::EntitySecret, &entity)?;
            out.write(&files::with_extension(&path, "pub"), MessageType::PublicRecord, &entity.record())?;
            println!("registered {id} as {}; credential verifies; keys {}", role.name(), path.display());
        }
        Command::Issue { keys, issuer_keys, services, central, text, params, registry, out: path } => {
            let pp = files::params(&params)?;
            let reg = files::registry(&registry)?;
            let user = files::keys(&keys)?;
            let issuer = files::keys(&issuer_keys)?;
            let (central_id, y_cv) = central_key(&reg, central.as_deref())?;
            let set = ServiceSet::with_central(services, &central_id)?;
            let (z_u, request) = user_build_ticket_request(&pp, &y_cv, &user.keys, &user.credential, &set, rng)?;
            let ticket = issuer_issue_ticket(&pp, &issuer.keys, &reg, &request, &FixedText(text), rng)?;
            let y_i = issuer.keys.public_g2().ok_or(Error::MissingG2Key(Role::Issuer))?;
            check_ticket(&pp, &ticket, &set, y_i).map_err(Error::TicketRejected)?;
            let ids = set.ids().join(",");
            out.write(&path, MessageType::UserTicket, &UserTicket { service_set: set, z_u, ticket })?;
            println!("ticket for {ids} verifies; wrote {}", path.display());
        }
        Command::Show { keys, ticket, verifier, trace, params, registry, out: path } => {
            let pp = files::params(&params)?;
            let reg = files::registry(&registry)?;
            let user = files::keys(&keys)?;
            let ut: UserTicket = files::read(&ticket, MessageType::UserTicket)?;
            let (central_id, y_cv) = central_key(&reg, Some(ut.service_set.central_id()))?;
            if trace {
                let req = user_trace_request(&pp, &y_cv, &ut.ticket, &ut.z_u, user.keys.secret(), &central_id, rng)?;
                let path = path.unwrap_or_else(|| "trace.bin".into());
                out.write(&path, MessageType::TraceRequest, &req)?;
                println!("trace request for {central_id}; wrote {}", path.display());
            } else {
                let target = verifier.expect("clap requires --verifier without --trace");
                let s = user_show_tag(&pp, &y_cv, &ut.ticket, &ut.z_u, user.keys.secret(), &target, rng)?;
                let path = path.unwrap_or_else(|| "showing.bin".into());
                out.write(&path, MessageType::Showing, &s)?;
                println!("showing for {target}; wrote {}", path.display());
            }
        }
        Command::Validate { keys, showing, ledger, issuer, central, params, registry } => {
            let pp = files::params(&params)?;
            let reg = files::registry(&registry)?;
            let verifier = files::keys(&keys)?;
            let s = files::read(&showing, MessageType::Showing)?;
            let y_i = issuer_g2(&reg, issuer.as_deref())?;
            let (_, y_cv) = central_key(&reg, central.as_deref())?;
            let ledger_path =
                ledger.unwrap_or_else(|| files::sibling(&registry, &format!("ledger.{}.log", verifier.id)));
            let ledger = SpendLedger::open(&ledger_path)?;
            match verifier_validate(&pp, &verifier.keys, &ledger, &s, &y_i, &y_cv)? {
                Verdict::Accept => println!("Accept"),
                Verdict::Reject(r) => return Err(Failure::Reject(r.name())),
            }
        }
        Command::Trace { keys, request, issuer, params, registry, out: path } => {
            let pp = files::params(&params)?;
            let reg = files::registry(&registry)?;
            let cv = files::keys(&keys)?;
            let req = files::read(&request, MessageType::TraceRequest)?;
            let y_i = issuer_g2(&reg, issuer.as_deref())?;
            let report = cv_trace(&pp, &cv.keys, &reg, &req, &y_i).map_err(|f| Failure::Reject(trace_class(f)))?;
            println!("user {} {}", report.user_id.as_deref().unwrap_or("-"), hx(&report.user_key));
            for (id, key) in &report.services {
                println!("service {id} {}", hx(key));
            }
            if let Some(path) = path {
                let j = json!({
                    "user_id": report.user_id,
                    "user_key": hx(&report.user_key),
                    "services": report.services.iter().map(|(id, k)| json!({ "id": id, "key": hx(k) })).collect::<Vec<_>>(),
                });
                fs::write(path, serde_json::to_string_pretty(&j).expect("json") + "\n").map_err(Error::Io)?;
            }
        }
        Command::Bench { iterations, verifiers, profile, out: path } => {
            if profile.security_bits() != 128 {
                return Err(Error::UnsupportedSecurityLevel(profile.security_bits()).into());
            }
            let report = run_bench(iterations, &verifiers, rng)?;
            print!("{}", report.to_table());
            fs::write(&path, serde_json::to_string_pretty(&report).expect("json") + "\n").map_err(Error::Io)?;
            println!("wrote {}", path.display());
        }
        Command::Inspect { file } => {
            if cli.armor {
                print!("{}", files::armor(&files::read_raw(&file)?)?);
            } else {
                let v = inspect::describe(Path::new(&file))?;
                println!("{}", serde_json::to_string_pretty(&v).expect("json"));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.seed.clone() {
        Some(seed) => run(cli, &mut seeded_rng(seed.as_bytes())),
        None => run(cli, &mut OsRng),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Error(e)) => {
            eprintln!("{}", json!({ "status": "error", "class": e.class(), "message": e.to_string() }));
            ExitCode::from(1)
        }
        Err(Failure::Reject(class)) => {
            eprintln!("{}", json!({ "status": "reject", "class": class }));
            ExitCode::from(3)
        }
    }
}

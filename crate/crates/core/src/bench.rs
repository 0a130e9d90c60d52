//! Phase timings for the full protocol, one row per phase and verifier count.

use std::time::Instant;

use rand::{CryptoRng, RngCore};
use serde::Serialize;

use crate::algebra::{setup_params, CurveId, PublicParams};
use crate::credentials::{ca_issue_credential, entity_keygen, verify_credential, Role};
use crate::error::Error;
use crate::protocol::{
    cv_trace, issuer_issue_ticket, register, user_build_ticket_request, user_show_tag, user_trace_request,
    user_verify_ticket, verifier_validate, FixedText, Registry, ServiceSet, SpendLedger, Verdict,
};

pub const INIT: &str = "initialise the system";
pub const VERIFY_TICKET: &str = "verify ticket";
pub const ISSUE: &str = "verify Pi1, generate ticket";
pub const VERIFY_TAG: &str = "verify Pi2 & Tag_V";

/// `(phase, entity, reference ms at 160 bits with 2 and 3 verifiers)`.
pub const PHASES: [(&str, &str, [u32; 2]); 16] = [
    (INIT, "CA", [1398, 1398]),
    ("generate I credentials", "CA", [12, 12]),
    ("verify I credentials", "I", [641, 641]),
    ("generate user credentials", "CA", [12, 12]),
    ("verify user credentials", "User", [301, 301]),
    ("generate CV credentials", "CA", [9, 9]),
    ("verify CV credentials", "CV", [269, 269]),
    ("generate V credentials", "CA", [10, 10]),
    ("verify V credentials", "V", [290, 290]),
    ("generate Pi1 & ticket request", "User", [93, 101]),
    (ISSUE, "Issuer", [481, 515]),
    (VERIFY_TICKET, "User", [764, 960]),
    ("retrieve Tag_V & generate Pi2", "User", [13, 13]),
    (VERIFY_TAG, "V", [225, 225]),
    ("retrieve ticket T_U & Tag_CV; generate Pi2", "User", [8, 9]),
    ("verify Pi2, Tag_CV; trace T_U", "CV", [983, 1146]),
];

#[derive(Clone, Debug, Serialize)]
pub struct BenchRow {
    pub phase: String,
    pub entity: String,
    pub verifiers: usize,
    pub mean_ms: f64,
    pub std_ms: f64,
    pub iterations: usize,
    pub reference_ms: Option<u32>,
}

#[derive(Clone, Debug, Serialize)]
pub struct HostInfo {
    pub os: String,
    pub arch: String,
    pub cpus: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct BenchReport {
    pub curve: String,
    pub security_bits: u32,
    pub host: HostInfo,
    pub rows: Vec<BenchRow>,
}

impl BenchReport {
    pub fn row(&self, phase: &str, verifiers: usize) -> Option<&BenchRow> {
        self.rows.iter().find(|r| r.phase == phase && r.verifiers == verifiers)
    }

    /// Plain-text table, one line per row.
    pub fn to_table(&self) -> String {
        let mut out = format!(
            "curve {} ({} bits) on {}/{} x{}\n{:<44} {:<7} {:>3} {:>10} {:>9} {:>6} {:>8}\n",
            self.curve,
            self.security_bits,
            self.host.os,
            self.host.arch,
            self.host.cpus,
            "phase",
            "entity",
            "V",
            "mean ms",
            "std ms",
            "iters",
            "ref(160)"
        );
        for r in &self.rows {
            let reference = r.reference_ms.map(|v| v.to_string()).unwrap_or_else(|| "-".into());
            out.push_str(&format!(
                "{:<44} {:<7} {:>3} {:>10.3} {:>9.3} {:>6} {:>8}\n",
                r.phase, r.entity, r.verifiers, r.mean_ms, r.std_ms, r.iterations, reference
            ));
        }
        out
    }
}

#[derive(Default)]
struct Samples(Vec<Vec<f64>>);

impl Samples {
    fn time<T>(&mut self, phase: usize, f: impl FnOnce() -> T) -> T {
        let start = Instant::now();
        let out = f();
        let ms = start.elapsed().as_secs_f64() * 1e3;
        if self.0.len() <= phase {
            self.0.resize(phase + 1, Vec::new());
        }
        self.0[phase].push(ms);
        out
    }
}

fn mean_std(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = if xs.len() > 1 { xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0) } else { 0.0 };
    (mean, var.sqrt())
}

fn phase_index(name: &str) -> usize {
    PHASES.iter().position(|(p, _, _)| *p == name).expect("known phase")
}

/// One full protocol run with every phase timed.
fn run_once<R: RngCore + CryptoRng>(samples: &mut Samples, verifiers: usize, rng: &mut R) -> Result<(), Error> {
    let (msk, pp): (_, PublicParams) = samples.time(0, || setup_params(128, &mut *rng))?;

    for (role, gen, ver) in
        [(Role::Issuer, 1, 2), (Role::User, 3, 4), (Role::CentralVerifier, 5, 6), (Role::Verifier, 7, 8)]
    {
        let keys = entity_keygen(&pp, role, rng);
        let cred = samples.time(gen, || ca_issue_credential(&pp, &msk, keys.public(), &mut *rng))?;
        let ok = samples.time(ver, || verify_credential(&pp, keys.public(), &cred));
        if !ok {
            return Err(Error::InvalidCredential);
        }
    }

    let mut reg = Registry::new();
    let issuer = register(&pp, &msk, &mut reg, Role::Issuer, "I", rng)?;
    let user = register(&pp, &msk, &mut reg, Role::User, "U", rng)?;
    let cv = register(&pp, &msk, &mut reg, Role::CentralVerifier, "CV", rng)?;
    let mut vs = Vec::with_capacity(verifiers);
    for i in 1..=verifiers {
        vs.push(register(&pp, &msk, &mut reg, Role::Verifier, &format!("V{i}"), rng)?);
    }
    let set = ServiceSet::with_central(vs.iter().map(|v| v.id.clone()), "CV")?;
    let y_cv = cv.keys.public();
    let y_i = issuer.keys.public_g2().expect("issuer keys carry a G2 key");
    let x_u = user.keys.secret();

    let (z_u, req) =
        samples.time(9, || user_build_ticket_request(&pp, y_cv, &user.keys, &user.credential, &set, &mut *rng))?;
    let text = FixedText("bench".into());
    let ticket =
        samples.time(phase_index(ISSUE), || issuer_issue_ticket(&pp, &issuer.keys, &reg, &req, &text, &mut *rng))?;
    if !samples.time(phase_index(VERIFY_TICKET), || user_verify_ticket(&pp, &ticket, &set, y_i)) {
        return Err(Error::InvalidCredential);
    }

    let showing = samples.time(12, || user_show_tag(&pp, y_cv, &ticket, &z_u, x_u, &vs[0].id, &mut *rng))?;
    let ledger = SpendLedger::in_memory();
    let verdict =
        samples.time(phase_index(VERIFY_TAG), || verifier_validate(&pp, &vs[0].keys, &ledger, &showing, y_i, y_cv))?;
    debug_assert_eq!(verdict, Verdict::Accept);

    let treq = samples.time(14, || user_trace_request(&pp, y_cv, &ticket, &z_u, x_u, "CV", &mut *rng))?;
    let report = samples.time(15, || cv_trace(&pp, &cv.keys, &reg, &treq, y_i));
    debug_assert!(report.is_ok());
    Ok(())
}

/// Runs every phase `iterations` times for each verifier count, after one
/// untimed warm-up run per count. Counts are interleaved round-robin so that
/// host drift lands on all of them alike. Counts are ordinary verifiers; the
/// central verifier is always added on top.
pub fn run_bench<R: RngCore + CryptoRng>(
    iterations: usize,
    verifier_counts: &[usize],
    rng: &mut R,
) -> Result<BenchReport, Error> {
    for &n in verifier_counts {
        run_once(&mut Samples::default(), n.max(1), rng)?;
    }
    let mut samples: Vec<Samples> = verifier_counts.iter().map(|_| Samples::default()).collect();
    for _ in 0..iterations.max(1) {
        for (s, &n) in samples.iter_mut().zip(verifier_counts) {
            run_once(s, n.max(1), rng)?;
        }
    }
    let mut rows = Vec::new();
    for (samples, &n) in samples.iter().zip(verifier_counts) {
        for (i, (phase, entity, reference)) in PHASES.iter().enumerate() {
            let (mean_ms, std_ms) = mean_std(&samples.0[i]);
            let reference_ms = match n {
                2 => Some(reference[0]),
                3 => Some(reference[1]),
                _ => None,
            };
            rows.push(BenchRow {
                phase: phase.to_string(),
                entity: entity.to_string(),
                verifiers: n,
                mean_ms,
                std_ms,
                iterations: samples.0[i].len(),
                reference_ms,
            });
        }
    }
    Ok(BenchReport {
        curve: format!("{:?}", CurveId::Bls12_381),
        security_bits: 128,
        host: HostInfo {
            os: std::env::consts::OS.into(),
            arch: std::env::consts::ARCH.into(),
            cpus: std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1),
        },
        rows,
    })
}

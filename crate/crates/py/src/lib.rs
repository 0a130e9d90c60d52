//! Python bindings: opaque handles over the core types plus one function per protocol phase.

use asso::algebra::{self, seeded_rng};
use asso::credentials::Role;
use asso::protocol::{self, Registered, RejectReason, Verdict};
use asso::transport::{decode_envelope, encode_envelope, Decode, Encode, MessageType};
use asso::{Error, G1, G2};
use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;
use pyo3::types::{PyBytes, PyDict};
use rand::rngs::OsRng;

create_exception!(asso_py, AssoError, PyException, "Raised with (class, message) on any protocol or decoding error.");

fn err(e: Error) -> PyErr {
    AssoError::new_err((e.class(), e.to_string()))
}

fn to_bytes<'py, T: Encode>(py: Python<'py>, ty: MessageType, x: &T) -> Bound<'py, PyBytes> {
    PyBytes::new(py, &encode_envelope(ty, x))
}

fn from_bytes<T: Decode>(ty: MessageType, b: &[u8]) -> PyResult<T> {
    decode_envelope(ty, b).map_err(err)
}

macro_rules! envelope_methods {
    ($py_ty:ident, $inner:ty, $msg:expr $(, { $($extra:tt)* })?) => {
        #[pymethods]
        impl $py_ty {
            $($($extra)*)?

            fn to_bytes<'py>(&self, py: Python<'py>) -> Bound<'py, PyBytes> {
                to_bytes(py, $msg, &self.0)
            }

            #[staticmethod]
            fn from_bytes(data: &[u8]) -> PyResult<Self> {
                Ok(Self(from_bytes::<$inner>($msg, data)?))
            }

            fn __eq__(&self, other: &Self) -> bool {
                self.0 == other.0
            }
        }
    };
}

#[pyclass(frozen, module = "asso_py")]
pub struct PublicParams(algebra::PublicParams);
envelope_methods!(PublicParams, algebra::PublicParams, MessageType::PublicParams);

#[pyclass(frozen, module = "asso_py")]
pub struct MasterSecret(algebra::MasterSecret);

#[pymethods]
impl MasterSecret {
    fn to_bytes<'py>(&self, py: Python<'py>) -> Bound<'py, PyBytes> {
        to_bytes(py, MessageType::MasterSecret, &self.0)
    }

    #[staticmethod]
    fn from_bytes(data: &[u8]) -> PyResult<Self> {
        Ok(Self(from_bytes(MessageType::MasterSecret, data)?))
    }
}

/// A registered entity's keys and credential.
#[pyclass(frozen, module = "asso_py")]
pub struct Entity(Registered);
envelope_methods!(Entity, Registered, MessageType::EntitySecret, {
    #[getter]
    fn id(&self) -> &str {
        &self.0.id
    }

    #[getter]
    fn role(&self) -> &'static str {
        self.0.keys.role().name()
    }

    #[getter]
    fn public_key<'py>(&self, py: Python<'py>) -> Bound<'py, PyBytes> {
        PyBytes::new(py, &self.0.keys.public().encode_to_vec())
    }
});

#[pyclass(module = "asso_py")]
pub struct Registry(protocol::Registry);

#[pymethods]
impl Registry {
    #[new]
    fn new() -> Self {
        Registry(protocol::Registry::new())
    }

    /// Opens or creates a file-backed registry.
    #[staticmethod]
    fn open(path: &str) -> PyResult<Self> {
        Ok(Registry(protocol::Registry::open(path).map_err(err)?))
    }

    fn ids(&self) -> Vec<String> {
        self.0.iter().map(|r| r.id.clone()).collect()
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }
}

impl Registry {
    fn record(&self, id: Option<&str>, role: Role) -> PyResult<&protocol::RegistryRecord> {
        let rec = match id {
            Some(id) => self.0.get(id).ok_or_else(|| err(Error::UnknownVerifier(id.into())))?,
            None => self.0.first_with_role(role).ok_or_else(|| err(Error::MissingRole(role)))?,
        };
        if rec.role != role {
            return Err(err(Error::MissingRole(role)));
        }
        Ok(rec)
    }

    fn issuer_g2(&self) -> PyResult<G2> {
        self.record(None, Role::Issuer)?.public_g2.ok_or_else(|| err(Error::MissingG2Key(Role::Issuer)))
    }

    fn central(&self, id: Option<&str>) -> PyResult<(String, G1)> {
        let rec = self.record(id, Role::CentralVerifier)?;
        Ok((rec.id.clone(), rec.public))
    }
}

#[pyclass(frozen, module = "asso_py")]
pub struct UserTicket(protocol::UserTicket);
envelope_methods!(UserTicket, protocol::UserTicket, MessageType::UserTicket, {
    #[getter]
    fn services(&self) -> Vec<String> {
        self.0.service_set.ids().to_vec()
    }
});

#[pyclass(frozen, module = "asso_py")]
pub struct Showing(protocol::Showing);
envelope_methods!(Showing, protocol::Showing, MessageType::Showing);

#[pyclass(frozen, module = "asso_py")]
pub struct TraceRequest(protocol::TraceRequest);
envelope_methods!(TraceRequest, protocol::TraceRequest, MessageType::TraceRequest);

/// Per-verifier double-spend ledger.
#[pyclass(frozen, module = "asso_py")]
pub struct SpendLedger(protocol::SpendLedger);

#[pymethods]
impl SpendLedger {
    #[new]
    fn new() -> Self {
        SpendLedger(protocol::SpendLedger::in_memory())
    }

    #[staticmethod]
    fn open(path: &str) -> PyResult<Self> {
        Ok(SpendLedger(protocol::SpendLedger::open(path).map_err(err)?))
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }
}

/// Returns `(params, master_secret)`. A seed makes the set-up deterministic.
#[pyfunction]
#[pyo3(signature = (seed=None))]
fn setup(seed: Option<&[u8]>) -> PyResult<(PublicParams, MasterSecret)> {
    let (msk, pp) = match seed {
        Some(s) => algebra::setup_params_seeded(128, s),
        None => algebra::setup_params(128, &mut OsRng),
    }
    .map_err(err)?;
    Ok((PublicParams(pp), MasterSecret(msk)))
}

/// Role is one of issuer, verifier, user, central-verifier (or cv).
#[pyfunction]
fn register(pp: &PublicParams, msk: &MasterSecret, registry: &mut Registry, role: &str, id: &str) -> PyResult<Entity> {
    let role: Role = role.parse().map_err(err)?;
    let e = protocol::register(&pp.0, &msk.0, &mut registry.0, role, id, &mut OsRng).map_err(err)?;
    Ok(Entity(e))
}

/// Builds the request, has the issuer answer it, and checks the ticket.
#[pyfunction]
#[pyo3(signature = (pp, registry, user, issuer, services, central=None, text=""))]
fn issue(
    pp: &PublicParams,
    registry: &Registry,
    user: &Entity,
    issuer: &Entity,
    services: Vec<String>,
    central: Option<&str>,
    text: &str,
) -> PyResult<UserTicket> {
    let (central_id, y_cv) = registry.central(central)?;
    let set = protocol::ServiceSet::with_central(services, &central_id).map_err(err)?;
    let u = &user.0;
    let (z_u, req) =
        protocol::user_build_ticket_request(&pp.0, &y_cv, &u.keys, &u.credential, &set, &mut OsRng).map_err(err)?;
    let ticket = protocol::issuer_issue_ticket(
        &pp.0,
        &issuer.0.keys,
        &registry.0,
        &req,
        &protocol::FixedText(text.into()),
        &mut OsRng,
    )
    .map_err(err)?;
    let y_i = issuer.0.keys.public_g2().ok_or_else(|| err(Error::MissingG2Key(Role::Issuer)))?;
    protocol::check_ticket(&pp.0, &ticket, &set, y_i).map_err(|f| err(Error::TicketRejected(f)))?;
    Ok(UserTicket(protocol::UserTicket { service_set: set, z_u, ticket }))
}

#[pyfunction]
fn show(
    pp: &PublicParams,
    registry: &Registry,
    user: &Entity,
    ticket: &UserTicket,
    verifier: &str,
) -> PyResult<Showing> {
    let t = &ticket.0;
    let (_, y_cv) = registry.central(Some(t.service_set.central_id()))?;
    protocol::user_show_tag(&pp.0, &y_cv, &t.ticket, &t.z_u, user.0.keys.secret(), verifier, &mut OsRng)
        .map(Showing)
        .map_err(err)
}

/// `"Accept"` or the reject reason, e.g. `"DoubleSpend"`.
#[pyfunction]
fn validate(
    pp: &PublicParams,
    registry: &Registry,
    verifier: &Entity,
    ledger: &SpendLedger,
    showing: &Showing,
) -> PyResult<&'static str> {
    let y_i = registry.issuer_g2()?;
    let (_, y_cv) = registry.central(None)?;
    let v = protocol::verifier_validate(&pp.0, &verifier.0.keys, &ledger.0, &showing.0, &y_i, &y_cv).map_err(err)?;
    Ok(match v {
        Verdict::Accept => "Accept",
        Verdict::Reject(r) => RejectReason::name(r),
    })
}

#[pyfunction]
fn trace_request(pp: &PublicParams, registry: &Registry, user: &Entity, ticket: &UserTicket) -> PyResult<TraceRequest> {
    let t = &ticket.0;
    let (central_id, y_cv) = registry.central(Some(t.service_set.central_id()))?;
    protocol::user_trace_request(&pp.0, &y_cv, &t.ticket, &t.z_u, user.0.keys.secret(), &central_id, &mut OsRng)
        .map(TraceRequest)
        .map_err(err)
}

/// Returns a dict with `user_id`, `user_key` and `services`; raises on failure.
#[pyfunction]
fn trace<'py>(
    py: Python<'py>,
    pp: &PublicParams,
    registry: &Registry,
    cv: &Entity,
    request: &TraceRequest,
) -> PyResult<Bound<'py, PyDict>> {
    let y_i = registry.issuer_g2()?;
    let report = protocol::cv_trace(&pp.0, &cv.0.keys, &registry.0, &request.0, &y_i)
        .map_err(|f| AssoError::new_err(("TraceFailed", format!("{f:?}"))))?;
    let d = PyDict::new(py);
    d.set_item("user_id", report.user_id.clone())?;
    d.set_item("user_key", PyBytes::new(py, &report.user_key.encode_to_vec()))?;
    d.set_item("services", report.service_ids())?;
    Ok(d)
}

/// `H(domain || payload)` as 32 big-endian bytes.
#[pyfunction]
fn hash_to_scalar<'py>(py: Python<'py>, domain: u8, payload: &[u8]) -> Bound<'py, PyBytes> {
    PyBytes::new(py, &algebra::hash_to_scalar(domain, payload).encode_to_vec())
}

/// Deterministic stream of `n` bytes from a seed, for reproducible fixtures.
#[pyfunction]
fn seeded_bytes<'py>(py: Python<'py>, seed: &[u8], n: usize) -> Bound<'py, PyBytes> {
    use rand::RngCore;
    let mut out = vec![0u8; n];
    seeded_rng(seed).fill_bytes(&mut out);
    PyBytes::new(py, &out)
}

#[pymodule]
fn asso_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("AssoError", m.py().get_type::<AssoError>())?;
    m.add_class::<PublicParams>()?;
    m.add_class::<MasterSecret>()?;
    m.add_class::<Entity>()?;
    m.add_class::<Registry>()?;
    m.add_class::<UserTicket>()?;
    m.add_class::<Showing>()?;
    m.add_class::<TraceRequest>()?;
    m.add_class::<SpendLedger>()?;
    m.add_function(wrap_pyfunction!(setup, m)?)?;
    m.add_function(wrap_pyfunction!(register, m)?)?;
    m.add_function(wrap_pyfunction!(issue, m)?)?;
    m.add_function(wrap_pyfunction!(show, m)?)?;
    m.add_function(wrap_pyfunction!(validate, m)?)?;
    m.add_function(wrap_pyfunction!(trace_request, m)?)?;
    m.add_function(wrap_pyfunction!(trace, m)?)?;
    m.add_function(wrap_pyfunction!(hash_to_scalar, m)?)?;
    m.add_function(wrap_pyfunction!(seeded_bytes, m)?)?;
    Ok(())
}

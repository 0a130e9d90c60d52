//! Anonymous single sign-on with designated verifiers.
//!
//! A user registers once with the CA, obtains a ticket from the issuer
//! covering a list of verifiers, and shows each verifier its own tag. Tags
//! are unlinkable across verifiers, checkable only by the verifier they
//! name, and single-use. The central verifier can open a ticket to recover
//! the user's key and the verifiers it covers.

pub mod algebra;
pub mod bench;
pub mod credentials;
pub mod error;
pub mod proofs;
pub mod protocol;
pub mod transport;

pub use algebra::{MasterSecret, PublicParams, Scalar, G1, G2};
pub use credentials::{Credential, EntityKeys, Role};
pub use error::Error;
pub use protocol::{AuthTag, ServiceSet, Showing, Ticket, UserTicket};

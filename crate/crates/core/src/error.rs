use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("relation is not a partial order: {0}")]
    NotAPoset(String),
    #[error("a frame needs at least one element")]
    EmptyOrder,
    #[error("not a lattice: {0} and {1} have no least upper bound or greatest lower bound")]
    NotALattice(String, String),
    #[error("not distributive: {0} ∧ ({1} ∨ {2}) differs from ({0} ∧ {1}) ∨ ({0} ∧ {2})")]
    NotDistributive(String, String, String),
    #[error("invalid space: {0}")]
    InvalidSpace(String),
    #[error("map does not send bottom to bottom and top to top")]
    EndpointViolation,
    #[error("map does not preserve the join of {0} and {1}")]
    NotJoinPreserving(String, String),
    #[error("map does not preserve the meet of {0} and {1}")]
    NotMeetPreserving(String, String),
    #[error("invalid image array: {0}")]
    InvalidImage(String),
    #[error("domain mismatch: {0}")]
    DomainMismatch(String),
    #[error("openness characterizations disagree: {0}")]
    CharacterizationMismatch(String),
    #[error("coproduct factors differ, diagonal complement needs L ⊕ L")]
    NotSquare,
    #[error("index poset is not directed: {0} and {1} have no upper bound")]
    NotDirected(String, String),
    #[error("incoherent directed system: {0}")]
    IncoherentSystem(String),
    #[error("join family entry {0}: the join of its parts is not its target")]
    InvalidJoinEntry(String),
    #[error("preimage filter is not a point of the target spectrum: {0}")]
    NotAPointImage(String),
    #[error("invalid preinterpretation: {0}")]
    InvalidPreinterpretation(String),
    #[error("frame is not Boolean: {0}")]
    NotBoolean(String),
    #[error("invalid ring: {0}")]
    InvalidRing(String),
    #[error("independent characterizations disagree: {0}")]
    ShadowMismatch(String),
    #[error("resource cap exceeded: {what} needs {needed}, cap is {cap}")]
    ResourceCap {
        what: &'static str,
        needed: usize,
        cap: usize,
    },
}

impl Error {
    pub(crate) fn cap(what: &'static str, needed: usize, cap: usize) -> Error {
        Error::ResourceCap { what, needed, cap }
    }
}

/// Hard limits on the size of intermediate objects. Exceeding a limit is an
/// error; nothing is truncated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Caps {
    /// Elements of a frame handled by module-level operations.
    pub frame_elements: usize,
    /// Elements of a coproduct frame.
    pub coproduct_elements: usize,
    /// Frame size up to which the full join family is materialized.
    pub full_join_family: usize,
    /// Ring elements.
    pub ring_elements: usize,
    /// Results of an exhaustive enumeration (maps, continuous functions).
    pub enumeration: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            frame_elements: 64,
            coproduct_elements: 4096,
            full_join_family: 16,
            ring_elements: 64,
            enumeration: 1 << 20,
        }
    }
}

impl Caps {
    pub fn check_frame(&self, n: usize) -> Result<()> {
        if n > self.frame_elements {
            return Err(Error::cap("frame elements", n, self.frame_elements));
        }
        Ok(())
    }
}

/// Size caps for the exponential searches.
///
/// Wall enumeration, cube-embedding search, and the lattice constructors are
/// gated by `max_elements` (default 32); the discrete branching-flat builder
/// is gated by `max_model_vertices`. Raising a cap never changes a result,
/// only how much work the caller is willing to pay for.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Limits {
    pub max_elements: usize,
    pub max_model_vertices: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_elements: 32,
            max_model_vertices: 32_000,
        }
    }
}

impl Limits {
    /// Raise both caps from a single CLI-style knob.
    pub fn with_max_elements(n: usize) -> Self {
        Limits {
            max_elements: n,
            max_model_vertices: 1_000 * n.max(32),
        }
    }
}

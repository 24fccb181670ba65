//! Bundled example inputs, embedded in the binary.

/// Which analysis an input file feeds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FixtureKind {
    Tubular,
    Fbc,
    Rbf,
    Median,
}

impl std::fmt::Display for FixtureKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FixtureKind::Tubular => write!(f, "tubular"),
            FixtureKind::Fbc => write!(f, "fbc"),
            FixtureKind::Rbf => write!(f, "rbf"),
            FixtureKind::Median => write!(f, "median"),
        }
    }
}

pub struct Fixture {
    pub name: &'static str,
    pub kind: FixtureKind,
    pub about: &'static str,
    pub json: &'static str,
}

pub const FIXTURES: &[Fixture] = &[
    Fixture {
        name: "c6_tetrahedron",
        kind: FixtureKind::Tubular,
        about: "tetrahedron of Z^2 vertices, three edge colours with directions \
                (1,0), (0,1), (1,-1): undistorted, three classes at every vertex",
        json: include_str!("../fixtures/c6_tetrahedron.json"),
    },
    Fixture {
        name: "croke_kleiner",
        kind: FixtureKind::Tubular,
        about: "path of three Z^2 vertices with primitive gluings: balanced, at \
                most two classes per vertex",
        json: include_str!("../fixtures/croke_kleiner.json"),
    },
    Fixture {
        name: "bs12_loop",
        kind: FixtureKind::Tubular,
        about: "one vertex, one self-loop identifying (1,0) with (2,0): the \
                classic distorted doubling loop",
        json: include_str!("../fixtures/bs12_loop.json"),
    },
    Fixture {
        name: "double_loop",
        kind: FixtureKind::Tubular,
        about: "two distorting self-loops in independent directions at one vertex",
        json: include_str!("../fixtures/double_loop.json"),
    },
    Fixture {
        name: "hyp_rel_gersten",
        kind: FixtureKind::Fbc,
        about: "rose on a,b,c,d: exponential {a,b}, linear c and d with suffixes \
                the first and second powers of the commutator cycle",
        json: include_str!("../fixtures/hyp_rel_gersten.json"),
    },
    Fixture {
        name: "more_than_gersten",
        kind: FixtureKind::Fbc,
        about: "fixed loops a, b with linear strata d, e (suffixes a, a^2) and c \
                (suffix b): rich linearity with a nearby source",
        json: include_str!("../fixtures/more_than_gersten.json"),
    },
    Fixture {
        name: "non_internal",
        kind: FixtureKind::Fbc,
        about: "linear edge c from an exponential part onto the fixed loop d: \
                not internal, no branching",
        json: include_str!("../fixtures/non_internal.json"),
    },
    Fixture {
        name: "rbf_axes_diag",
        kind: FixtureKind::Rbf,
        about: "2-dimensional branching data along the axes and an anti-diagonal",
        json: include_str!("../fixtures/rbf_axes_diag.json"),
    },
    Fixture {
        name: "square_median",
        kind: FixtureKind::Median,
        about: "the 4-point square median algebra with its l^1 metric",
        json: include_str!("../fixtures/square_median.json"),
    },
];

pub fn find(name: &str) -> Option<&'static Fixture> {
    FIXTURES.iter().find(|f| f.name == name)
}

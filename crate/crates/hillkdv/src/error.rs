use thiserror::Error;

/// Errors surfaced by the spectral pipeline.
#[derive(Error, Debug)]
pub enum Error {
    #[error("coefficient at index 0 is not allowed (potentials are zero-mean)")]
    NonZeroMean,
    #[error("real flag set but coefficients violate hermitian symmetry at k={0}")]
    NotReal(i64),
    #[error("grid of {got} points aliases modes up to {max_index}; need at least {need}")]
    GridTooCoarse {
        got: usize,
        max_index: i64,
        need: usize,
    },
    #[error("eigenvalue solver did not converge")]
    ConvergenceFailure,
    #[error("lexicographically tied eigenvalues near n={0} cannot be assigned consistently with the parity rule")]
    OrderingAmbiguity(usize),
    #[error("Newton iterate for the discriminant critical point left the isolating neighborhood of gap {0}")]
    NewtonDivergence(usize),
    #[error("evaluation point is on (or within guard distance of) the branch cut of gap {0}")]
    OnCut(usize),
    #[error("quadrature did not converge: node doubling changed the value by {0:.3e}")]
    NotConverged(f64),
    #[error("contour for gap {0} violates the radius policy (gap too wide for its isolating disc)")]
    ContourTouchesGap(usize),
    #[error("integration path crosses the cut of gap {0}")]
    PathCrossesCut(usize),
    #[error("sample spread of {0:.2} decades is too small for a stable asymptotic fit")]
    IllConditionedFit(f64),
    #[error("coefficient window {got} too small for gap index {n} (need at least {need})")]
    WindowTooSmall { got: usize, n: usize, need: usize },
    #[error("Neumann series for the reduced resolvent diverges at gap {0}")]
    NeumannDivergence(usize),
    #[error("argument-principle count over the root disc of gap {n} returned {count}, expected 2")]
    RootCountMismatch { n: usize, count: i64 },
    #[error("action I_{n} = {value:.3e} is negative beyond tolerance for a real potential")]
    NegativeAction { n: usize, value: f64 },
    #[error("amplitude ladder too shallow: extrapolation uncertainty {0:.1}% exceeds 10%")]
    LadderTooShallow(f64),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

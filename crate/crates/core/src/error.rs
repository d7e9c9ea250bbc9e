use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid mode configuration: {0}")]
    InvalidConfig(String),

    #[error("stage {stage} is degenerate: dressed splitting is zero")]
    DegenerateStage { stage: usize },

    #[error("cannot evaluate a term sum containing field shift {shift}; trace the field first")]
    UntracedShift { shift: i64 },

    #[error(
        "stage {stage}: no static sigma+ term at shift {shift} to extract the next coupling from"
    )]
    Extraction { stage: usize, shift: i64 },

    #[error("two-mode closed form requires exactly 2 modes, got {0}")]
    NotTwoMode(usize),

    #[error("weak-field closed form requires a uniformly spaced comb: {0}")]
    NonUniformSpacing(String),

    #[error("tau grids differ: {0}")]
    GridMismatch(String),

    #[error("oracle halfwidth {halfwidth} too small; need more than {required}")]
    WindowTooSmall { halfwidth: usize, required: usize },

    #[error("weight window {window} exceeds oracle halfwidth {halfwidth}")]
    WindowOverflow { window: usize, halfwidth: usize },

    #[error("all coherent amplitudes are zero")]
    EmptyField,

    #[error("matrix is not Hermitian (defect {0:e})")]
    NotHermitian(f64),
}

pub type Result<T> = std::result::Result<T, Error>;

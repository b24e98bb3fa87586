use thiserror::Error;

/// Errors shared by all modules of the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("element {0} does not fit in the 64-bit index representation")]
    IndexOverflow(u32),

    #[error("enumeration over {size} elements exceeds the cap of {cap}")]
    EnumerationBudget { size: usize, cap: usize },

    #[error("search budget of {limit} nodes exhausted")]
    SearchBudget { limit: u64 },

    #[error("no witness prefix found within the search cap of {cap}")]
    WitnessSearchExhausted { cap: u32 },

    #[error("element {elem} lies outside the universe of size {size}")]
    OutsideUniverse { elem: u32, size: u32 },

    #[error("universe of size {size} is too small; {needed} elements are required")]
    UniverseTooSmall { size: u32, needed: u64 },

    #[error("a rule's choice set is empty after truncation to the universe")]
    EmptyChoices,

    #[error("start set is not contained in the ambient set")]
    StartNotContained,

    #[error("start set is not closed under the operator")]
    StartNotClosed,

    #[error("the property fails on the start set")]
    StartNotSatisfying,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("syntax error at line {line}, column {col}: {msg}")]
    Syntax { line: u32, col: u32, msg: String },

    #[error("unbound variable `{0}`")]
    UnboundVariable(String),

    #[error("unknown set parameter `{0}`")]
    UnknownParameter(String),

    #[error("free variable `{0}` has no assignment")]
    UnassignedVariable(String),

    #[error("property is not of finite character over the working universe: {0}")]
    NotFiniteCharacter(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    /// Budget errors are reported distinctly from input errors (exit code 2
    /// versus 1 in the CLI): they mean the answer is undecided, not wrong.
    pub fn is_budget(&self) -> bool {
        matches!(
            self,
            Error::EnumerationBudget { .. }
                | Error::SearchBudget { .. }
                | Error::WitnessSearchExhausted { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;

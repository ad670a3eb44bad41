use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("letter {letter} outside alphabet of size {alphabet}")]
    LetterOutOfRange { letter: u8, alphabet: usize },

    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),

    #[error("morphism not prolongable at letter {0}")]
    NotProlongable(u8),

    #[error("image set is not a bifix code: {0}")]
    NotBifixCode(String),

    #[error("word is not a concatenation of images (stuck at position {0})")]
    NotInImage(usize),

    #[error("stream exhausted after {0} letters")]
    ExhaustedStream(usize),

    #[error("block schedule exhausted after {blocks} blocks ({covered} letters covered, {requested} requested)")]
    ExhaustedSchedule {
        blocks: usize,
        covered: usize,
        requested: usize,
    },

    #[error("recurrence budget exceeded: no occurrence of a {factor_len}-letter factor after position {from} within limit {limit}")]
    RecurrenceBudgetExceeded {
        factor_len: usize,
        from: usize,
        limit: usize,
    },

    #[error("memory budget exceeded: prefix of {requested} letters over cap of {cap} bytes")]
    MemoryBudgetExceeded { requested: usize, cap: usize },

    #[error("unknown catalog name: {0}")]
    UnknownName(String),

    #[error("cannot parse morphism: {0}")]
    MorphismParse(String),
}

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A precondition of `op` does not hold.
    #[error("{op}: {msg}")]
    Domain { op: &'static str, msg: String },

    #[error("parse error at line {line}, column {column}: {msg}")]
    Parse {
        line: usize,
        column: usize,
        msg: String,
    },

    /// A degree table violates one of its structural invariants at entry (g, h).
    #[error("degree table invariant violated at (g, h) = ({g}, {h}): {msg}")]
    Invariant { g: u64, h: u64, msg: String },

    #[error("no bundled degree table for field {field} and group <{group}>")]
    MissingBundle { field: String, group: String },

    #[error("integer overflow in {0}")]
    Overflow(&'static str),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn domain(op: &'static str, msg: impl Into<String>) -> Self {
        Error::Domain {
            op,
            msg: msg.into(),
        }
    }

    pub(crate) fn parse(line: usize, column: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            column,
            msg: msg.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

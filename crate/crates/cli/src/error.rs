use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Library(#[from] hamstat::Error),
    #[error("cannot write {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    /// 1 for bad input, 2 for failures inside numerical iterations.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Library(e) if e.is_numerical() => 2,
            _ => 1,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Library(e) if e.is_numerical() => "numerical",
            CliError::Library(_) => "precondition",
            CliError::Io { .. } => "io",
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        assert_eq!(CliError::usage("x").exit_code(), 1);
        let pre = CliError::from(hamstat::Error::InvalidParameter("p".into()));
        assert_eq!((pre.exit_code(), pre.kind()), (1, "precondition"));
        let num = CliError::from(hamstat::Error::NoConvergence {
            iterations: 50,
            residual: 1.0,
        });
        assert_eq!((num.exit_code(), num.kind()), (2, "numerical"));
        let piv = CliError::from(hamstat::Error::VanishingPivot { i: 0, j: 4 });
        assert_eq!(piv.exit_code(), 2);
    }
}

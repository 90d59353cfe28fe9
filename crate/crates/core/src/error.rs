use thiserror::Error;

#[derive(Debug, Error)]
pub enum FlabError {
    #[error("input error: {0}")]
    Input(String),
    #[error("resource bound exceeded: {what} has order {order}, bound is {bound}")]
    Resource {
        what: String,
        order: usize,
        bound: usize,
    },
    #[error("axiom ({axiom}) violated: {witness}")]
    Axiom { axiom: String, witness: String },
    #[error("internal inconsistency: {0}")]
    Internal(String),
    #[error("{stage}: {source}")]
    Stage {
        stage: String,
        source: Box<FlabError>,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, FlabError>;

impl FlabError {
    pub fn input(msg: impl Into<String>) -> Self {
        FlabError::Input(msg.into())
    }

    pub fn internal(msg: impl Into<String>) -> Self {
        FlabError::Internal(msg.into())
    }

    pub fn axiom(axiom: impl Into<String>, witness: impl Into<String>) -> Self {
        FlabError::Axiom {
            axiom: axiom.into(),
            witness: witness.into(),
        }
    }

    pub fn in_stage(self, stage: &str) -> Self {
        FlabError::Stage {
            stage: stage.to_string(),
            source: Box::new(self),
        }
    }

    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            FlabError::Stage { source, .. } => source.exit_code(),
            FlabError::Resource { .. } => 3,
            FlabError::Axiom { .. } | FlabError::Internal(_) => 1,
            FlabError::Input(_) | FlabError::Io(_) | FlabError::Json(_) => 2,
        }
    }
}

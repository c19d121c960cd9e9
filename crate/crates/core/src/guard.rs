use crate::error::{Error, Result};

/// Default bound on the order of a form for exhaustive searches (`36^2`).
pub const DEFAULT_MAX_FORM_ORDER: u64 = 1296;

/// Environment variable that overrides [`DEFAULT_MAX_FORM_ORDER`].
pub const MAX_FORM_ORDER_ENV: &str = "MAX_FORM_ORDER";

/// Size limit for the brute-force parts of the pipeline.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Guard {
    max_form_order: u64,
}

impl Guard {
    pub fn new(max_form_order: u64) -> Self {
        Self { max_form_order }
    }

    /// Reads `MAX_FORM_ORDER`, falling back to the default when unset or unparsable.
    pub fn from_env() -> Self {
        std::env::var(MAX_FORM_ORDER_ENV)
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .map(Self::new)
            .unwrap_or_default()
    }

    pub fn max_form_order(&self) -> u64 {
        self.max_form_order
    }

    pub fn check(&self, what: &'static str, needed: u64) -> Result<()> {
        if needed > self.max_form_order {
            Err(Error::GuardExceeded {
                what,
                needed,
                limit: self.max_form_order,
            })
        } else {
            Ok(())
        }
    }
}

impl Default for Guard {
    fn default() -> Self {
        Self::new(DEFAULT_MAX_FORM_ORDER)
    }
}

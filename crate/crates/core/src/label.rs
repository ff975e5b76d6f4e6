use std::fmt;

use serde::{Deserialize, Serialize};

/// A location label, 1-based (`1..=M`) as in the site survey.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ClassLabel(u16);

impl ClassLabel {
    /// `number` must be at least 1.
    pub fn new(number: u16) -> Option<Self> {
        (number >= 1).then_some(ClassLabel(number))
    }

    /// From a 0-based logit index.
    pub fn from_index(index: usize) -> Self {
        ClassLabel(index as u16 + 1)
    }

    /// 0-based position in the logit vector.
    pub fn index(self) -> usize {
        self.0 as usize - 1
    }

    pub fn number(self) -> u16 {
        self.0
    }
}

impl fmt::Display for ClassLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

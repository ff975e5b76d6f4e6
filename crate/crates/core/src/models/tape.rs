use crate::error::{Error, Result};

/// Per-sample forward records waiting for a backward pass.
///
/// A forward pass over a batch pushes one entry per sample; the matching backward pass drains
/// them. Draining an empty tape is a usage error.
#[derive(Debug)]
pub struct Tape<C> {
    entries: Vec<C>,
}

impl<C> Default for Tape<C> {
    fn default() -> Self {
        Tape { entries: Vec::new() }
    }
}

impl<C> Tape<C> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub(crate) fn push(&mut self, entry: C) {
        self.entries.push(entry);
    }

    pub(crate) fn drain(&mut self, op: &'static str, expected: usize) -> Result<Vec<C>> {
        if self.entries.is_empty() {
            return Err(Error::NoForwardCache(op));
        }
        if self.entries.len() != expected {
            return Err(Error::shape(op, self.entries.len(), expected));
        }
        Ok(std::mem::take(&mut self.entries))
    }
}

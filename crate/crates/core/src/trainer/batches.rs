use rand::seq::SliceRandom;

use crate::rng::{stream, tag};

/// Endless minibatch index stream over `len` items: each pass is a fresh permutation seeded
/// by `(seed, stream_id, pass)`.
#[derive(Debug, Clone)]
pub struct CyclicBatches {
    len: usize,
    seed: u64,
    stream_id: u64,
    pass: u64,
    order: Vec<usize>,
    pos: usize,
}

impl CyclicBatches {
    pub fn new(len: usize, seed: u64, stream_id: u64) -> Self {
        assert!(len > 0, "cannot batch an empty set");
        let mut b = CyclicBatches {
            len,
            seed,
            stream_id,
            pass: 0,
            order: Vec::new(),
            pos: 0,
        };
        b.reshuffle();
        b
    }

    fn reshuffle(&mut self) {
        self.order = (0..self.len).collect();
        let mut rng = stream(self.seed, &[tag::SHUFFLE, self.stream_id, self.pass]);
        self.order.shuffle(&mut rng);
        self.pos = 0;
    }

    /// Completed passes so far.
    pub fn pass(&self) -> u64 {
        self.pass
    }

    /// Next `n` indices, continuing into a new permutation when the current one runs out.
    pub fn next_batch(&mut self, n: usize) -> Vec<usize> {
        let mut out = Vec::with_capacity(n);
        while out.len() < n {
            if self.pos == self.len {
                self.pass += 1;
                self.reshuffle();
            }
            let take = (n - out.len()).min(self.len - self.pos);
            out.extend_from_slice(&self.order[self.pos..self.pos + take]);
            self.pos += take;
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn each_pass_is_a_permutation() {
        let mut b = CyclicBatches::new(10, 1, 0);
        let mut first: Vec<usize> = (0..5).flat_map(|_| b.next_batch(2)).collect();
        first.sort_unstable();
        assert_eq!(first, (0..10).collect::<Vec<_>>());
        let second = b.next_batch(10);
        assert_eq!(b.pass(), 1);
        assert_ne!(second, (0..10).collect::<Vec<_>>());
    }

    #[test]
    fn deterministic() {
        let a: Vec<usize> = CyclicBatches::new(7, 3, 1).next_batch(20);
        let b: Vec<usize> = CyclicBatches::new(7, 3, 1).next_batch(20);
        assert_eq!(a, b);
    }
}

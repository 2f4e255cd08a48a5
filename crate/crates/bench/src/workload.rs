//! Random segment generation shared by the fuzzer and the bound sweep.

use bitstree::{Coord, SegId, Segment};
use rand::Rng;
use serde::Serialize;

/// Endpoints are drawn uniformly from `[lo, hi]`; lengths uniformly from
/// `[1, max(1, (hi - lo) / 4)]`, truncated at `hi`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Window {
    pub lo: Coord,
    pub hi: Coord,
}

impl Default for Window {
    fn default() -> Self {
        Self { lo: 0, hi: 1000 }
    }
}

impl Window {
    pub fn max_len(&self) -> Coord {
        ((self.hi - self.lo) / 4).max(1)
    }

    pub fn segment(&self, rng: &mut impl Rng, id: SegId) -> Segment<Coord> {
        let (lo, hi) = self.span(rng);
        Segment::new(id, lo, hi).expect("span is never empty")
    }

    /// A random non-empty `(lo, hi)` pair inside the window.
    pub fn span(&self, rng: &mut impl Rng) -> (Coord, Coord) {
        let lo = rng.gen_range(self.lo..self.hi);
        let len = rng.gen_range(1..=self.max_len());
        (lo, (lo + len).min(self.hi))
    }

    pub fn describe(&self) -> String {
        format!(
            "lower endpoints uniform on [{}, {}), lengths uniform on [1, {}] clipped to the window",
            self.lo,
            self.hi,
            self.max_len()
        )
    }
}

/// `n` segments with ids `0..n`.
pub fn random_set(rng: &mut impl Rng, window: Window, n: usize) -> Vec<Segment<Coord>> {
    (0..n).map(|i| window.segment(rng, SegId(i as u64))).collect()
}

/// Nested segments `[n - i, n + i]`, `i = 1..=n`: every node list holds every
/// segment covering it, which drives the cumulative list size to `n²`.
pub fn nested_set(n: usize) -> Vec<Segment<Coord>> {
    let c = n as Coord;
    (1..=c)
        .map(|i| Segment::new(SegId(i as u64 - 1), c - i, c + i).unwrap())
        .collect()
}

//! Closed intervals on a totally ordered line and the overlap algebra the
//! trees are built on: left/right ordering, the overlap classes, union and
//! intersection, and the three-way split of two overlapping intervals.
//!
//! Node ranges are interior-disjoint: two intervals that only share an
//! endpoint are *not* overlapping, and their intersection is empty.

use std::cmp::{max, min};
use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

/// Coordinate type used by the reference build and the baselines.
pub type Coord = i64;

/// Requirements on a coordinate: exact total order, cheap to copy.
pub trait Point: Ord + Copy + fmt::Debug {}

impl<T: Ord + Copy + fmt::Debug> Point for T {}

/// Identifier of a stored segment. Identity is the id, not the endpoints.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SegId(pub u64);

impl fmt::Display for SegId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// A set of segment ids, as kept in a node list.
pub type IdSet = BTreeSet<SegId>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IntervalError {
    #[error("interval [{lo}, {hi}] is empty: lower end must be strictly below upper end")]
    Empty { lo: String, hi: String },
    #[error("intervals {0} and {1} do not overlap")]
    Disjoint(String, String),
}

/// A non-empty closed interval `[lo, hi]` with `lo < hi`.
///
/// The empty range is spelled `Option::<Range<_>>::None` wherever it can
/// occur, so a `Range` value is never empty.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Range<C> {
    lo: C,
    hi: C,
}

impl<C: Point> Range<C> {
    pub fn new(lo: C, hi: C) -> Result<Self, IntervalError> {
        if lo < hi {
            Ok(Self { lo, hi })
        } else {
            Err(IntervalError::Empty {
                lo: format!("{lo:?}"),
                hi: format!("{hi:?}"),
            })
        }
    }

    /// `[lo, hi]` if non-empty, otherwise `None`.
    pub fn spanning(lo: C, hi: C) -> Option<Self> {
        (lo < hi).then_some(Self { lo, hi })
    }

    pub fn lo(&self) -> C {
        self.lo
    }

    pub fn hi(&self) -> C {
        self.hi
    }

    /// Closed containment of a point.
    pub fn contains(&self, x: C) -> bool {
        self.lo <= x && x <= self.hi
    }

    /// `other` lies inside `self` (closed).
    pub fn covers(&self, other: &Self) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    /// Closed intersection is non-empty (touching endpoints count).
    pub fn touches(&self, other: &Self) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    /// Interiors intersect.
    pub fn overlaps(&self, other: &Self) -> bool {
        max(self.lo, other.lo) < min(self.hi, other.hi)
    }

    pub(crate) fn set_lo(&mut self, lo: C) {
        debug_assert!(lo < self.hi);
        self.lo = lo;
    }

    pub(crate) fn set_hi(&mut self, hi: C) {
        debug_assert!(self.lo < hi);
        self.hi = hi;
    }
}

impl<C: fmt::Display> fmt::Display for Range<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}]", self.lo, self.hi)
    }
}

/// A stored object: an identified closed interval with `lo < hi`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Segment<C> {
    id: SegId,
    range: Range<C>,
}

impl<C: Point> Segment<C> {
    pub fn new(id: SegId, lo: C, hi: C) -> Result<Self, IntervalError> {
        Ok(Self {
            id,
            range: Range::new(lo, hi)?,
        })
    }

    pub fn from_range(id: SegId, range: Range<C>) -> Self {
        Self { id, range }
    }

    pub fn id(&self) -> SegId {
        self.id
    }

    pub fn lo(&self) -> C {
        self.range.lo
    }

    pub fn hi(&self) -> C {
        self.range.hi
    }

    pub fn range(&self) -> Range<C> {
        self.range
    }
}

/// Coarse ordering of two intervals: one falls entirely on one side of the
/// other (touching allowed), or their interiors meet.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Placement {
    LeftOf,
    RightOf,
    Overlapping,
}

/// How `S` relates to `T`. Exactly one class holds for any pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OverlapClass {
    /// `S.hi <= T.lo`
    LeftOf,
    /// `T.hi <= S.lo`
    RightOf,
    /// `p < m < q < n`
    LeftOverlaps,
    /// `m < p < n < q`
    RightOverlaps,
    /// `S` inside `T`, sharing at most one endpoint.
    ContainedIn,
    /// `T` inside `S`, sharing at most one endpoint.
    CoveredUp,
    Equal,
}

impl OverlapClass {
    /// The class of `(T, S)` given the class of `(S, T)`.
    pub fn mirror(self) -> Self {
        match self {
            Self::LeftOf => Self::RightOf,
            Self::RightOf => Self::LeftOf,
            Self::LeftOverlaps => Self::RightOverlaps,
            Self::RightOverlaps => Self::LeftOverlaps,
            Self::ContainedIn => Self::CoveredUp,
            Self::CoveredUp => Self::ContainedIn,
            Self::Equal => Self::Equal,
        }
    }

    pub fn is_overlap(self) -> bool {
        !matches!(self, Self::LeftOf | Self::RightOf)
    }
}

pub fn compare_intervals<C: Point>(s: &Range<C>, t: &Range<C>) -> Placement {
    if s.hi <= t.lo {
        Placement::LeftOf
    } else if t.hi <= s.lo {
        Placement::RightOf
    } else {
        Placement::Overlapping
    }
}

pub fn classify_overlap<C: Point>(s: &Range<C>, t: &Range<C>) -> OverlapClass {
    let (p, q, m, n) = (s.lo, s.hi, t.lo, t.hi);
    match compare_intervals(s, t) {
        Placement::LeftOf => OverlapClass::LeftOf,
        Placement::RightOf => OverlapClass::RightOf,
        Placement::Overlapping => {
            if p == m && q == n {
                OverlapClass::Equal
            } else if m <= p && q <= n {
                OverlapClass::ContainedIn
            } else if p <= m && n <= q {
                OverlapClass::CoveredUp
            } else if p < m {
                OverlapClass::LeftOverlaps
            } else {
                OverlapClass::RightOverlaps
            }
        }
    }
}

/// Smallest interval containing both inputs.
pub fn interval_union<C: Point>(s: &Range<C>, t: &Range<C>) -> Range<C> {
    Range {
        lo: min(s.lo, t.lo),
        hi: max(s.hi, t.hi),
    }
}

/// Interior intersection; `None` when the inputs are disjoint or only touch.
pub fn interval_intersection<C: Point>(s: &Range<C>, t: &Range<C>) -> Option<Range<C>> {
    Range::spanning(max(s.lo, t.lo), min(s.hi, t.hi))
}

/// Split of `S ∪ T` for two overlapping intervals into the part left of the
/// intersection, the intersection, and the part right of it, each with the
/// list it inherits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition<C> {
    pub left: Option<Range<C>>,
    pub center: Range<C>,
    pub right: Option<Range<C>>,
    pub left_list: IdSet,
    pub center_list: IdSet,
    pub right_list: IdSet,
}

/// Splits two overlapping intervals and distributes their lists.
///
/// The center carries both lists. The left part carries the list of
/// whichever input starts further left, the right part the list of whichever
/// ends further right; a part collapses to `None` (with an empty list) when
/// both inputs share that endpoint.
pub fn partition<C: Point>(
    s: &Range<C>,
    list_s: &IdSet,
    t: &Range<C>,
    list_t: &IdSet,
) -> Result<Partition<C>, IntervalError> {
    let center = interval_intersection(s, t)
        .ok_or_else(|| IntervalError::Disjoint(format!("{s:?}"), format!("{t:?}")))?;
    let (p, q, m, n) = (s.lo, s.hi, t.lo, t.hi);

    let left = Range::spanning(min(p, m), max(p, m));
    let left_list = match p.cmp(&m) {
        std::cmp::Ordering::Less => list_s.clone(),
        std::cmp::Ordering::Greater => list_t.clone(),
        std::cmp::Ordering::Equal => IdSet::new(),
    };

    let right = Range::spanning(min(q, n), max(q, n));
    let right_list = match n.cmp(&q) {
        std::cmp::Ordering::Less => list_s.clone(),
        std::cmp::Ordering::Greater => list_t.clone(),
        std::cmp::Ordering::Equal => IdSet::new(),
    };

    Ok(Partition {
        left,
        center,
        right,
        left_list,
        center_list: list_s.union(list_t).copied().collect(),
        right_list,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(lo: i64, hi: i64) -> Range<i64> {
        Range::new(lo, hi).unwrap()
    }

    fn ids(v: &[u64]) -> IdSet {
        v.iter().copied().map(SegId).collect()
    }

    #[test]
    fn compare_examples() {
        assert_eq!(compare_intervals(&r(5, 10), &r(10, 12)), Placement::LeftOf);
        assert_eq!(compare_intervals(&r(12, 15), &r(5, 10)), Placement::RightOf);
        assert_eq!(compare_intervals(&r(5, 10), &r(7, 12)), Placement::Overlapping);
    }

    #[test]
    fn classify_examples() {
        assert_eq!(classify_overlap(&r(2, 7), &r(5, 10)), OverlapClass::LeftOverlaps);
        assert_eq!(classify_overlap(&r(5, 10), &r(5, 10)), OverlapClass::Equal);
        assert_eq!(classify_overlap(&r(6, 9), &r(5, 10)), OverlapClass::ContainedIn);
        assert_eq!(classify_overlap(&r(5, 9), &r(5, 10)), OverlapClass::ContainedIn);
        assert_eq!(classify_overlap(&r(5, 10), &r(6, 10)), OverlapClass::CoveredUp);
        assert_eq!(classify_overlap(&r(7, 12), &r(5, 10)), OverlapClass::RightOverlaps);
        assert_eq!(classify_overlap(&r(10, 12), &r(5, 10)), OverlapClass::RightOf);
    }

    #[test]
    fn union_and_intersection() {
        assert_eq!(interval_union(&r(2, 7), &r(5, 10)), r(2, 10));
        assert_eq!(interval_intersection(&r(2, 7), &r(5, 10)), Some(r(5, 7)));
        assert_eq!(interval_intersection(&r(5, 10), &r(10, 12)), None);
        assert_eq!(interval_intersection(&r(1, 2), &r(5, 10)), None);
    }

    #[test]
    fn empty_ranges_are_rejected() {
        assert!(Range::new(3, 3).is_err());
        assert!(Range::new(4, 3).is_err());
        assert!(Segment::new(SegId(1), 7, 7).is_err());
        assert_eq!(Range::spanning(3, 3), None);
    }

    #[test]
    fn partition_left_overlap() {
        // d = [2,7] against a node [5,10] holding a
        let p = partition(&r(2, 7), &ids(&[4]), &r(5, 10), &ids(&[1])).unwrap();
        assert_eq!(p.left, Some(r(2, 5)));
        assert_eq!(p.left_list, ids(&[4]));
        assert_eq!(p.center, r(5, 7));
        assert_eq!(p.center_list, ids(&[1, 4]));
        assert_eq!(p.right, Some(r(7, 10)));
        assert_eq!(p.right_list, ids(&[1]));
    }

    #[test]
    fn partition_equal_collapses_sides() {
        let p = partition(&r(5, 10), &ids(&[1]), &r(5, 10), &ids(&[2])).unwrap();
        assert_eq!(p.left, None);
        assert_eq!(p.right, None);
        assert!(p.left_list.is_empty() && p.right_list.is_empty());
        assert_eq!(p.center, r(5, 10));
        assert_eq!(p.center_list, ids(&[1, 2]));
    }

    #[test]
    fn partition_right_overlap() {
        // S = [13,17] {s=7} against T = [12,15] {b=2}
        let p = partition(&r(13, 17), &ids(&[7]), &r(12, 15), &ids(&[2])).unwrap();
        assert_eq!((p.left, p.left_list), (Some(r(12, 13)), ids(&[2])));
        assert_eq!((p.center, p.center_list), (r(13, 15), ids(&[2, 7])));
        assert_eq!((p.right, p.right_list), (Some(r(15, 17)), ids(&[7])));
    }

    #[test]
    fn partition_right_list_follows_the_longer_input() {
        // n < q: S reaches further right, right part is S's
        let p = partition(&r(0, 9), &ids(&[1]), &r(2, 5), &ids(&[2])).unwrap();
        assert_eq!(p.right_list, ids(&[1]));
        // n > q: T reaches further right
        let p = partition(&r(0, 4), &ids(&[1]), &r(2, 5), &ids(&[2])).unwrap();
        assert_eq!(p.right_list, ids(&[2]));
    }

    #[test]
    fn partition_rejects_disjoint_and_touching() {
        assert!(partition(&r(0, 2), &ids(&[1]), &r(2, 5), &ids(&[2])).is_err());
        assert!(partition(&r(0, 1), &ids(&[1]), &r(2, 5), &ids(&[2])).is_err());
    }

    fn all_ranges(limit: i64) -> Vec<Range<i64>> {
        let mut out = Vec::new();
        for lo in 0..=limit {
            for hi in lo + 1..=limit {
                out.push(r(lo, hi));
            }
        }
        out
    }

    #[test]
    fn exhaustive_partition_properties() {
        let (ls, lt) = (ids(&[1]), ids(&[2]));
        let ranges = all_ranges(8);
        for s in &ranges {
            for t in &ranges {
                let class = classify_overlap(s, t);
                assert_eq!(classify_overlap(t, s), class.mirror(), "{s:?} {t:?}");
                assert_eq!(class.is_overlap(), s.overlaps(t));
                if !class.is_overlap() {
                    continue;
                }
                let p = partition(s, &ls, t, &lt).unwrap();
                let q = partition(t, &lt, s, &ls).unwrap();
                assert_eq!(p, q, "partition must be symmetric for {s:?} {t:?}");

                // ordered, interior-disjoint, covering exactly S ∪ T
                let parts: Vec<Range<i64>> =
                    [p.left, Some(p.center), p.right].into_iter().flatten().collect();
                for w in parts.windows(2) {
                    assert_eq!(w[0].hi(), w[1].lo());
                }
                let u = interval_union(s, t);
                assert_eq!(parts.first().unwrap().lo(), u.lo());
                assert_eq!(parts.last().unwrap().hi(), u.hi());

                assert_eq!(p.left.is_none(), s.lo() == t.lo());
                assert_eq!(p.right.is_none(), s.hi() == t.hi());
                assert!(p.center_list.is_superset(&ls) && p.center_list.is_superset(&lt));
                for side in [&p.left_list, &p.right_list] {
                    assert!(side == &ls || side == &lt || side.is_empty());
                }
                assert_eq!(p.left.is_none(), p.left_list.is_empty());
                assert_eq!(p.right.is_none(), p.right_list.is_empty());
            }
        }
    }
}

//! Brute-force reference answers by linear scan. In differential tests the
//! oracle is the semantic authority: any disagreement is a tree bug.

use std::collections::BTreeMap;

use crate::interval::{IdSet, Point, Range, SegId, Segment};

#[derive(Debug, Clone, Default)]
pub struct SegmentBag<C> {
    segments: BTreeMap<SegId, Segment<C>>,
}

impl<C: Point> SegmentBag<C> {
    pub fn new() -> Self {
        Self {
            segments: BTreeMap::new(),
        }
    }

    /// Returns `false` (and keeps the old entry) if the id is taken.
    pub fn insert(&mut self, seg: Segment<C>) -> bool {
        match self.segments.entry(seg.id()) {
            std::collections::btree_map::Entry::Occupied(_) => false,
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(seg);
                true
            }
        }
    }

    pub fn remove(&mut self, id: SegId) -> Option<Segment<C>> {
        self.segments.remove(&id)
    }

    pub fn get(&self, id: SegId) -> Option<&Segment<C>> {
        self.segments.get(&id)
    }

    pub fn len(&self) -> usize {
        self.segments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Segment<C>> + '_ {
        self.segments.values()
    }

    pub fn ids(&self) -> impl Iterator<Item = SegId> + '_ {
        self.segments.keys().copied()
    }

    /// `{ s : s.lo <= x <= s.hi }`
    pub fn stab(&self, x: C) -> IdSet {
        self.segments
            .values()
            .filter(|s| s.lo() <= x && x <= s.hi())
            .map(|s| s.id())
            .collect()
    }

    /// `{ s : s.lo <= q.hi && q.lo <= s.hi }`
    pub fn range(&self, q: &Range<C>) -> IdSet {
        self.segments
            .values()
            .filter(|s| s.lo() <= q.hi() && q.lo() <= s.hi())
            .map(|s| s.id())
            .collect()
    }
}

impl<C: Point> FromIterator<Segment<C>> for SegmentBag<C> {
    fn from_iter<I: IntoIterator<Item = Segment<C>>>(iter: I) -> Self {
        let mut bag = Self::new();
        for s in iter {
            bag.insert(s);
        }
        bag
    }
}

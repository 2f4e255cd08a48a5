//! Segment storage with dynamic insertion and deletion, answering stabbing
//! and range queries.
//!
//! [`BitsTree`] is a height-balanced, two-way inorder-threaded tree whose
//! nodes hold interior-disjoint ranges, each with the ids of the segments
//! covering it. Its range is never fixed in advance: any segment can be
//! inserted. [`SstTree`] and [`DstTree`] are the classic static and
//! range-bounded dynamic segment trees, instrumented with the same
//! [`TreeStats`] and [`QueryTrace`] metrics, and [`SegmentBag`] answers the
//! same queries by brute force.
//!
//! ```
//! use bitstree::{BitsTree, SegId, Segment};
//!
//! let mut tree = BitsTree::new();
//! tree.insert(Segment::new(SegId(1), 5, 12).unwrap()).unwrap();
//! tree.insert(Segment::new(SegId(2), 10, 15).unwrap()).unwrap();
//! let hit = tree.stab(11);
//! assert_eq!(hit.output_segments.len(), 2);
//! ```

pub mod baselines;
pub mod interval;
pub mod metrics;
pub mod oracle;
pub mod tree;

pub use baselines::{BaselineError, DstTree, SstTree};
pub use interval::{
    classify_overlap, compare_intervals, interval_intersection, interval_union, partition, Coord, IdSet,
    IntervalError, OverlapClass, Partition, Placement, Point, Range, SegId, Segment,
};
pub use metrics::{QueryTrace, TreeStats};
pub use oracle::SegmentBag;
pub use tree::{BitsTree, InvariantViolation, NodeRef, NodeView, RotationKind, RotationRecord, TreeError};

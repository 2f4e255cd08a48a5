use super::*;
use crate::oracle::SegmentBag;

const A: SegId = SegId(1);
const B: SegId = SegId(2);
const C: SegId = SegId(3);
const D: SegId = SegId(4);

fn seg(id: SegId, lo: i64, hi: i64) -> Segment<i64> {
    Segment::new(id, lo, hi).unwrap()
}

fn r(lo: i64, hi: i64) -> Range<i64> {
    Range::new(lo, hi).unwrap()
}

fn ids(v: &[SegId]) -> IdSet {
    v.iter().copied().collect()
}

fn table_segments() -> Vec<Segment<i64>> {
    vec![seg(A, 5, 12), seg(B, 10, 15), seg(C, 18, 21)]
}

fn built_by_insertion() -> BitsTree<i64> {
    let mut t = BitsTree::new();
    for s in table_segments() {
        t.insert(s).unwrap();
        t.check_invariants().unwrap();
    }
    t
}

/// The four-node tree as drawn: [12,15] at the root, [5,10] below it on the
/// left with [10,12] as its right child, [18,21] on the right.
fn drawn_tree() -> BitsTree<i64> {
    BitsTree::from_layout(table_segments(), &[r(12, 15), r(5, 10), r(10, 12), r(18, 21)]).unwrap()
}

fn shape(t: &BitsTree<i64>) -> Vec<(Range<i64>, IdSet)> {
    t.inorder()
}

#[test]
fn empty_tree() {
    let t = BitsTree::<i64>::new();
    assert_eq!(t.node_count(), 0);
    assert_eq!(t.segment_count(), 0);
    assert!(t.stab(7).output_segments.is_empty());
    assert!(t.inorder().is_empty());
    t.check_invariants().unwrap();
    assert_eq!(t.stats().height, -1);
    assert_eq!(t.range(NodeRef::HEAD), None);
}

#[test]
fn first_insertion_makes_a_root() {
    let mut t = BitsTree::new();
    t.insert(seg(SegId(9), 1, 3)).unwrap();
    assert_eq!(shape(&t), vec![(r(1, 3), ids(&[SegId(9)]))]);
    assert_eq!(t.stats().height, 0);
    assert_eq!(t.predecessor(t.root()), NodeRef::HEAD);
    assert_eq!(t.successor(t.root()), NodeRef::HEAD);
}

#[test]
fn three_segments_give_four_nodes() {
    let t = built_by_insertion();
    assert_eq!(
        shape(&t),
        vec![
            (r(5, 10), ids(&[A])),
            (r(10, 12), ids(&[A, B])),
            (r(12, 15), ids(&[B])),
            (r(18, 21), ids(&[C])),
        ]
    );
    let s = t.stats();
    assert_eq!((s.node_count, s.height, s.cumulative_list_size), (4, 2, 5));
}

#[test]
fn drawn_tree_matches_insertion_built_contents() {
    assert_eq!(shape(&drawn_tree()), shape(&built_by_insertion()));
    assert_eq!(drawn_tree().stats().height, 2);
}

#[test]
fn inserting_d_splits_and_rotates_left_right() {
    let mut t = drawn_tree();
    t.enable_rotation_audit();
    t.insert(seg(D, 2, 7)).unwrap();
    t.check_invariants().unwrap();
    assert_eq!(
        shape(&t),
        vec![
            (r(2, 5), ids(&[D])),
            (r(5, 7), ids(&[A, D])),
            (r(7, 10), ids(&[A])),
            (r(10, 12), ids(&[A, B])),
            (r(12, 15), ids(&[B])),
            (r(18, 21), ids(&[C])),
        ]
    );
    let log = t.drain_rotation_log();
    assert_eq!(log.len(), 1);
    assert_eq!(log[0].kind, RotationKind::LeftRight);
    assert_eq!(log[0].pivot, r(12, 15));
    assert_eq!(log[0].before, log[0].after);
    // [10,12] is lifted to the root
    assert_eq!(t.range(t.root()), Some(&r(10, 12)));
    assert_eq!(t.stats().height, 2);
}

#[test]
fn inserting_into_a_gap_adds_one_node() {
    let mut t = drawn_tree();
    let before = shape(&t);
    t.insert(seg(SegId(7), 16, 17)).unwrap();
    t.check_invariants().unwrap();
    let mut expected = before;
    expected.insert(3, (r(16, 17), ids(&[SegId(7)])));
    assert_eq!(shape(&t), expected);
}

#[test]
fn segment_spanning_nodes_and_gaps() {
    let mut t = built_by_insertion();
    let e = SegId(5);
    t.insert(seg(e, 0, 30)).unwrap();
    t.check_invariants().unwrap();
    assert_eq!(
        shape(&t),
        vec![
            (r(0, 5), ids(&[e])),
            (r(5, 10), ids(&[A, e])),
            (r(10, 12), ids(&[A, B, e])),
            (r(12, 15), ids(&[B, e])),
            (r(15, 18), ids(&[e])),
            (r(18, 21), ids(&[C, e])),
            (r(21, 30), ids(&[e])),
        ]
    );
}

#[test]
fn duplicate_geometry_distinct_ids() {
    let mut t = BitsTree::new();
    t.insert(seg(A, 0, 4)).unwrap();
    t.insert(seg(B, 0, 4)).unwrap();
    assert_eq!(shape(&t), vec![(r(0, 4), ids(&[A, B]))]);
    assert!(t.delete(&seg(A, 0, 4)).unwrap());
    assert_eq!(shape(&t), vec![(r(0, 4), ids(&[B]))]);
    t.check_invariants().unwrap();
}

#[test]
fn insert_rejects_duplicate_ids() {
    let mut t = built_by_insertion();
    assert_eq!(t.insert(seg(A, 40, 50)), Err(TreeError::DuplicateId(A)));
    assert_eq!(t.segment_count(), 3);
}

#[test]
fn deleting_a_from_the_six_node_tree() {
    let mut t = drawn_tree();
    t.insert(seg(D, 2, 7)).unwrap();
    assert!(t.delete(&seg(A, 5, 12)).unwrap());
    t.check_invariants().unwrap();
    assert_eq!(
        shape(&t),
        vec![(r(2, 7), ids(&[D])), (r(10, 15), ids(&[B])), (r(18, 21), ids(&[C]))]
    );
}

#[test]
fn deleting_c_unlinks_its_node() {
    let mut t = drawn_tree();
    assert!(t.delete(&seg(C, 18, 21)).unwrap());
    t.check_invariants().unwrap();
    assert_eq!(
        shape(&t),
        vec![(r(5, 10), ids(&[A])), (r(10, 12), ids(&[A, B])), (r(12, 15), ids(&[B]))]
    );
}

#[test]
fn deleting_twice_is_a_no_op() {
    let mut t = built_by_insertion();
    assert!(t.delete(&seg(A, 5, 12)).unwrap());
    let after = shape(&t);
    assert!(!t.delete(&seg(A, 5, 12)).unwrap());
    assert_eq!(shape(&t), after);
    assert!(!t.delete_id(SegId(99)));
}

#[test]
fn delete_with_wrong_endpoints_is_an_error() {
    let mut t = built_by_insertion();
    assert!(matches!(
        t.delete(&seg(A, 5, 13)),
        Err(TreeError::EndpointMismatch { id, .. }) if id == A
    ));
    assert_eq!(t.segment_count(), 3);
}

#[test]
fn deleting_everything_empties_the_tree() {
    let mut t = drawn_tree();
    t.insert(seg(D, 2, 7)).unwrap();
    for id in [B, D, C, A] {
        assert!(t.delete_id(id));
        t.check_invariants().unwrap();
    }
    assert!(t.is_empty());
    assert_eq!(t.node_count(), 0);
}

#[test]
fn stab_examples() {
    let mut t = drawn_tree();
    t.insert(seg(D, 2, 7)).unwrap();
    assert_eq!(t.stab(6).output_segments, ids(&[A, D]));
    let at5 = t.stab(5);
    assert_eq!(at5.output_segments, ids(&[A, D]));
    assert_eq!(at5.nodes_emitted, 2);
    assert!(drawn_tree().stab(16).output_segments.is_empty());
}

#[test]
fn stab_closed_ends_and_outside() {
    let t = built_by_insertion();
    assert_eq!(t.stab(15).output_segments, ids(&[B]));
    assert_eq!(t.stab(18).output_segments, ids(&[C]));
    assert_eq!(t.stab(21).output_segments, ids(&[C]));
    assert_eq!(t.stab(5).output_segments, ids(&[A]));
    assert_eq!(t.stab(12).output_segments, ids(&[A, B]));
    assert!(t.stab(4).output_segments.is_empty());
    assert!(t.stab(22).output_segments.is_empty());
}

#[test]
fn stab_cost_on_the_four_node_tree() {
    let t = built_by_insertion();
    let worst = (0..=25).map(|x| t.stab(x).nodes_visited).max().unwrap();
    assert_eq!(worst, 4);
    assert!(t.stab(11).nodes_visited <= 4);
}

#[test]
fn range_query_examples() {
    let mut t = drawn_tree();
    t.insert(seg(D, 2, 7)).unwrap();
    assert_eq!(t.range_query(&r(11, 14)).output_segments, ids(&[A, B]));
    assert_eq!(t.range_query(&r(2, 21)).output_segments, ids(&[A, B, C, D]));
    assert_eq!(drawn_tree().range_query(&r(15, 18)).output_segments, ids(&[B, C]));
    assert!(drawn_tree().range_query(&r(16, 17)).output_segments.is_empty());
    assert!(drawn_tree().range_query(&r(30, 40)).output_segments.is_empty());
    assert_eq!(drawn_tree().range_query(&r(0, 5)).output_segments, ids(&[A]));
}

#[test]
fn layout_rejects_unbalanced_or_overlapping_shapes() {
    let chain = [r(5, 10), r(10, 12), r(12, 15), r(18, 21)];
    assert!(matches!(
        BitsTree::from_layout(table_segments(), &chain),
        Err(TreeError::Layout(_))
    ));
    let overlapping = [r(10, 12), r(5, 11)];
    assert!(BitsTree::from_layout(table_segments(), &overlapping).is_err());
    // misses the segments' coverage
    let partial = [r(10, 12)];
    assert!(BitsTree::from_layout(table_segments(), &partial).is_err());
}

#[test]
fn checker_detects_corruption() {
    let mut t = built_by_insertion();
    let first = t.first();
    t.node_mut(first).list.insert(SegId(77));
    assert!(t.check_invariants().is_err());

    let mut t = built_by_insertion();
    let root = t.root();
    t.node_mut(root).height += 1;
    assert!(matches!(t.check_invariants(), Err(InvariantViolation::Height { .. })));

    let mut t = built_by_insertion();
    let last = t.last();
    t.node_mut(last).right = t.first();
    assert!(matches!(t.check_invariants(), Err(InvariantViolation::Thread { .. })));
}

#[test]
fn threads_of_first_and_last_reach_head() {
    let t = built_by_insertion();
    let first = t.first();
    let last = t.last();
    assert!(t.node(first).left_thread && t.node(first).left.is_head());
    assert!(t.node(last).right_thread && t.node(last).right.is_head());
    assert_eq!(t.successor(NodeRef::HEAD), first);
    assert_eq!(t.predecessor(NodeRef::HEAD), last);
}

#[test]
fn ascending_inserts_stay_balanced() {
    let mut t = BitsTree::new();
    for i in 0..200u64 {
        let lo = i as i64 * 2;
        t.insert(seg(SegId(i), lo, lo + 1)).unwrap();
    }
    t.check_invariants().unwrap();
    let s = t.stats();
    assert_eq!(s.node_count, 200);
    assert!(s.height <= 8, "height {}", s.height);
    for i in (0..200u64).step_by(3) {
        assert!(t.delete_id(SegId(i)));
    }
    t.check_invariants().unwrap();
}

#[test]
fn small_random_workload_matches_oracle() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    let mut t = BitsTree::new();
    let mut bag = SegmentBag::new();
    let mut next = 0u64;
    for _ in 0..3000 {
        if bag.is_empty() || rng.gen_bool(0.55) {
            let lo = rng.gen_range(0..60);
            let hi = lo + rng.gen_range(1..=15);
            let s = seg(SegId(next), lo, hi);
            next += 1;
            t.insert(s).unwrap();
            bag.insert(s);
        } else {
            let live: Vec<SegId> = bag.ids().collect();
            let id = live[rng.gen_range(0..live.len())];
            let s = bag.remove(id).unwrap();
            assert!(t.delete(&s).unwrap());
        }
        t.check_invariants().unwrap();
        for x in -1..=76 {
            assert_eq!(t.stab(x).output_segments, bag.stab(x), "stab {x}");
        }
    }
}

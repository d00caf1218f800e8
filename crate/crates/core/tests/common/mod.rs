#![allow(dead_code)]

use colstab::matrix::Mat;
use colstab::{RingDescriptor, RingElement};
use proptest::prelude::*;

pub fn rings3() -> [RingDescriptor; 2] {
    [RingDescriptor::polynomial(3), RingDescriptor::laurent(3)]
}

pub fn any_mode_ring(nvars: usize) -> impl Strategy<Value = RingDescriptor> {
    prop_oneof![Just(RingDescriptor::polynomial(nvars)), Just(RingDescriptor::laurent(nvars))]
}

/// Up to `max_terms` terms with coefficients in `-5..=5` and exponents in
/// `0..=2` (or `-2..=2` in Laurent mode).
pub fn element(ring: RingDescriptor, max_terms: usize) -> impl Strategy<Value = RingElement> {
    let lo = if ring.mode == colstab::Mode::Laurent { -2 } else { 0 };
    prop::collection::vec((-5i64..=5, prop::collection::vec(lo..=2i32, ring.nvars)), 0..=max_terms).prop_map(
        move |terms| {
            terms.iter().fold(ring.zero(), |acc, (c, e)| &acc + &ring.monomial(*c, e))
        },
    )
}

pub fn ring_and_element(nvars: usize, max_terms: usize) -> impl Strategy<Value = (RingDescriptor, RingElement)> {
    any_mode_ring(nvars).prop_flat_map(move |r| (Just(r), element(r, max_terms)))
}

pub fn square(ring: RingDescriptor, n: usize, max_terms: usize) -> impl Strategy<Value = Mat<RingElement>> {
    prop::collection::vec(element(ring, max_terms), n * n).prop_map(move |v| {
        Mat::from_rows(ring, v.chunks(n).map(|c| c.to_vec()).collect()).unwrap()
    })
}

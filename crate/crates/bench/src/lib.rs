//! Workloads shared by the benchmarks.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sic_core::encodings::full_code;
use sic_core::gen::{random_cut_free, random_total_net, NetShape};
use sic_core::structure::plug;
use sic_core::{CellKind, Net, PortRef};

/// Juxtaposition of `count` seeded random total nets with up to 12 cells:
/// many independent redexes, the favourable case for parallel rounds.
pub fn many_total_nets(count: usize, seed: u64) -> Net {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let shape = NetShape::new(12, 3);
    (0..count)
        .filter_map(|_| random_total_net(&mut rng, &shape, 200, 100))
        .fold(Net::empty(), |acc, n| acc.juxtapose(&n))
}

/// A duplicated full code: one δ cell meeting a deep cut-free δ-free tree.
pub fn duplication_workload(seed: u64) -> Net {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut inner = random_cut_free(&mut rng, 1, 4, &CellKind::BINARY);
    inner.set_loops(0);
    let code = full_code(&inner);
    let mut ctx = Net::with_interface(3);
    let d = ctx.add_cell(CellKind::Delta);
    ctx.link(PortRef::Free(1), PortRef::p(d));
    ctx.link(PortRef::aux(d, 1), PortRef::Free(2));
    ctx.link(PortRef::aux(d, 2), PortRef::Free(3));
    plug(&ctx, &code).expect("one-port code")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn workloads_are_valid() {
        many_total_nets(20, 1).validate().unwrap();
        duplication_workload(2).validate().unwrap();
    }
}

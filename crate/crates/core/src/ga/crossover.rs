//! Crossover operators over equal-length parent paths with shared endpoints.

use rand::Rng;

use crate::path_enum::Chromosome;
use crate::topology::NodeId;

fn check_parents(p1: &Chromosome, p2: &Chromosome) {
    assert_eq!(
        p1.node_count(),
        p2.node_count(),
        "crossover parents must have equal length"
    );
    assert_eq!(p1.source(), p2.source(), "parents must share the source");
    assert_eq!(
        p1.destination(),
        p2.destination(),
        "parents must share the destination"
    );
}

/// Uniformly picks crossover sites `(a, b)` with `1 <= a < b <= len-1`; the
/// swapped segment is the index range `[a, b)`, so endpoints never move.
/// Consumes exactly one draw.
fn pick_sites<R: Rng>(len: usize, rng: &mut R) -> (usize, usize) {
    let interior = len - 2; // positions 1..len-1
    let pairs = interior * (interior + 1) / 2;
    let mut k = rng.random_range(0..pairs);
    let mut a = 1;
    loop {
        let with_this_a = len - 1 - a; // choices of b in a+1..=len-1
        if k < with_this_a {
            return (a, a + 1 + k);
        }
        k -= with_this_a;
        a += 1;
    }
}

/// Builds one child: `keep`'s genes outside the segment, `seg_from`'s genes
/// inside, with outside conflicts repaired through the position mapping
/// `seg_from[k] -> keep[k]` until the gene leaves the implanted segment.
fn pmx_child(keep: &[NodeId], seg_from: &[NodeId], a: usize, b: usize) -> Vec<NodeId> {
    let seg = &seg_from[a..b];
    let mut child = keep.to_vec();
    child[a..b].copy_from_slice(seg);
    for i in (0..a).chain(b..keep.len()) {
        let mut gene = keep[i];
        let mut steps = 0;
        while let Some(k) = seg.iter().position(|&g| g == gene) {
            gene = keep[a + k];
            steps += 1;
            // Chains over duplicate-free parents terminate; the guard only
            // protects against malformed input.
            if steps > keep.len() {
                break;
            }
        }
        child[i] = gene;
    }
    child
}

/// Partially mapped crossover between two equal-length parents.
///
/// Two sites strictly inside the path are drawn, the segments between them
/// are exchanged position by position, and outside genes that now collide
/// with the implanted segment are replaced through the segment's position
/// mapping. Children keep both endpoints and never repeat a gene; the caller
/// validates adjacency and discards broken children.
pub fn multipoint_crossover<R: Rng>(
    p1: &Chromosome,
    p2: &Chromosome,
    rng: &mut R,
) -> (Chromosome, Chromosome) {
    check_parents(p1, p2);
    if p1.node_count() < 3 {
        // No interior genes to exchange.
        return (p1.clone(), p2.clone());
    }
    let (a, b) = pick_sites(p1.node_count(), rng);
    let c1 = pmx_child(p1.nodes(), p2.nodes(), a, b);
    let c2 = pmx_child(p2.nodes(), p1.nodes(), a, b);
    (Chromosome::from_nodes(c1), Chromosome::from_nodes(c2))
}

/// Single-point crossover: each child takes one parent's prefix and the
/// other's suffix at a uniformly drawn interior cut. Children may repeat
/// genes; validation filters them out.
pub fn single_point_crossover<R: Rng>(
    p1: &Chromosome,
    p2: &Chromosome,
    rng: &mut R,
) -> (Chromosome, Chromosome) {
    check_parents(p1, p2);
    let len = p1.node_count();
    if len < 3 {
        return (p1.clone(), p2.clone());
    }
    let cut = rng.random_range(1..len);
    let splice = |head: &[NodeId], tail: &[NodeId]| {
        let mut nodes = head[..cut].to_vec();
        nodes.extend_from_slice(&tail[cut..]);
        Chromosome::from_nodes(nodes)
    };
    (
        splice(p1.nodes(), p2.nodes()),
        splice(p2.nodes(), p1.nodes()),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand_chacha::rand_core::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn chrom(ids: &[usize]) -> Chromosome {
        Chromosome::from_nodes(ids.iter().map(|&i| NodeId(i)).collect())
    }

    #[test]
    fn self_crossover_is_identity() {
        let p = chrom(&[1, 2, 3, 4, 5, 6, 7]);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let (c1, c2) = multipoint_crossover(&p, &p, &mut rng);
        assert_eq!(c1, p);
        assert_eq!(c2, p);
    }

    #[test]
    fn three_node_parents_swap_the_middle_gene() {
        let p1 = chrom(&[0, 1, 9]);
        let p2 = chrom(&[0, 2, 9]);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let (c1, c2) = multipoint_crossover(&p1, &p2, &mut rng);
        assert_eq!(c1, p2);
        assert_eq!(c2, p1);
    }

    #[test]
    fn hand_traced_pmx_children() {
        // Segment [3, 5): parent interiors exchange 4 5 <-> 6 2 with the
        // mapping 6<->4, 2<->5 repairing the outside collisions.
        let p1 = chrom(&[1, 2, 3, 4, 5, 6, 7]);
        let p2 = chrom(&[1, 3, 4, 6, 2, 5, 7]);
        let c1 = pmx_child(p1.nodes(), p2.nodes(), 3, 5);
        let c2 = pmx_child(p2.nodes(), p1.nodes(), 3, 5);
        assert_eq!(Chromosome::from_nodes(c1), chrom(&[1, 5, 3, 6, 2, 4, 7]));
        assert_eq!(Chromosome::from_nodes(c2), chrom(&[1, 3, 6, 4, 5, 2, 7]));
    }

    #[test]
    fn textbook_pmx_trace() {
        let p1 = chrom(&[9, 8, 4, 5, 6, 7, 1, 3, 2, 10]);
        let p2 = chrom(&[8, 7, 1, 2, 3, 10, 9, 5, 4, 6]);
        let c1 = pmx_child(p1.nodes(), p2.nodes(), 3, 6);
        assert_eq!(
            Chromosome::from_nodes(c1),
            chrom(&[9, 8, 4, 2, 3, 10, 1, 6, 5, 7])
        );
    }

    #[test]
    fn sites_cover_exactly_the_interior_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut seen = std::collections::BTreeSet::new();
        for _ in 0..500 {
            let (a, b) = pick_sites(5, &mut rng);
            assert!(1 <= a && a < b && b <= 4);
            seen.insert((a, b));
        }
        assert_eq!(seen.len(), 6, "all (a, b) pairs for len 5 appear");
        // Forced single pair for three-node paths.
        assert_eq!(pick_sites(3, &mut rng), (1, 2));
    }

    #[test]
    fn single_point_splices_at_the_cut() {
        let p1 = chrom(&[1, 2, 3, 4, 7]);
        let p2 = chrom(&[1, 3, 4, 6, 7]);
        // Find a seed whose first draw cuts at position 2.
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let (c1, c2) = single_point_crossover(&p1, &p2, &mut rng);
        let cut_used = (1..5)
            .find(|&c| {
                c1.nodes()[..c] == p1.nodes()[..c] && c1.nodes()[c..] == p2.nodes()[c..]
            })
            .expect("child1 must be a prefix/suffix splice");
        assert_eq!(c2.nodes()[..cut_used], p2.nodes()[..cut_used]);
        assert_eq!(c2.nodes()[cut_used..], p1.nodes()[cut_used..]);
        assert_eq!(c1.source(), p1.source());
        assert_eq!(c1.destination(), p1.destination());
    }
}

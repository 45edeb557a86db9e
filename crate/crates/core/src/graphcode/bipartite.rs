//! Edge coloring of the bipartite view of a two-decoder coding graph.
//!
//! With two decoders, block `x` is the edge joining its two side projections
//! `x^(S_1^c)` (left) and `x^(S_2^c)` (right). Blocks adjacent in `G(Q)` are
//! exactly edges sharing an endpoint, so a proper edge coloring is a proper
//! vertex coloring of `G(Q)`. Parallel edges occur when the demand sets
//! overlap and are handled like any other.

use super::{budget_u64, checked_class_size, clique_number, ColoringMode, TypeColoring};
use crate::network::{DecoderView, SourceNetwork};
use crate::typekit::{class_indexer, GroupedMultiset, JointType};
use crate::Result;

const NONE: u32 = u32::MAX;

/// Colors `G(Q)` with exactly `max_j |shell_j|` colors, the bipartite
/// maximum degree, by alternating-path recoloring.
pub fn color_bipartite(q: &JointType, sn: &SourceNetwork, cap: u64) -> Result<TypeColoring> {
    ColoringMode::Bipartite.check(sn)?;
    let size = checked_class_size(q, cap)?;
    let delta = budget_u64(clique_number(q, sn)?)? as usize;
    let indexer = class_indexer(q)?;
    let (left, right) = (side_indexer(q, &sn.views()[0])?, side_indexer(q, &sn.views()[1])?);
    let n_left = left.size() as usize;
    let n_nodes = n_left + right.size() as usize;

    let mut ends = Vec::with_capacity(size);
    for r in 0..size as u64 {
        let joint = indexer.unrank(r)?;
        let u = left.rank(&project(&joint, &sn.views()[0]))? as usize;
        let v = right.rank(&project(&joint, &sn.views()[1]))? as usize;
        ends.push((u, n_left + v));
    }

    // at[node * delta + c] is the edge of color c at node
    let mut at = vec![NONE; n_nodes * delta];
    let mut color = vec![NONE; size];
    let mut path = Vec::new();
    for (e, &(u, v)) in ends.iter().enumerate() {
        let free = |node: usize, at: &[u32]| {
            (0..delta)
                .find(|&c| at[node * delta + c] == NONE)
                .expect("node degree below delta")
        };
        let alpha = free(u, &at);
        let beta = free(v, &at);
        if at[v * delta + alpha] != NONE {
            // swap alpha and beta along the path leaving v on alpha; it
            // cannot reach u, which is free of alpha
            path.clear();
            let (mut node, mut want) = (v, alpha);
            while at[node * delta + want] != NONE {
                let f = at[node * delta + want] as usize;
                path.push(f);
                let (a, b) = ends[f];
                node = if a == node { b } else { a };
                want = if want == alpha { beta } else { alpha };
            }
            for &f in &path {
                let (a, b) = ends[f];
                let c = color[f] as usize;
                at[a * delta + c] = NONE;
                at[b * delta + c] = NONE;
            }
            for &f in &path {
                let (a, b) = ends[f];
                let c = if color[f] as usize == alpha { beta } else { alpha };
                color[f] = c as u32;
                at[a * delta + c] = f as u32;
                at[b * delta + c] = f as u32;
            }
        }
        color[e] = alpha as u32;
        at[u * delta + alpha] = e as u32;
        at[v * delta + alpha] = e as u32;
    }

    let used = color.iter().map(|&c| c + 1).max().unwrap_or(0);
    Ok(TypeColoring {
        q: q.clone(),
        colors: color,
        colors_used: used,
        budget: delta as u64,
    })
}

fn project(joint: &[usize], view: &DecoderView) -> Vec<usize> {
    joint.iter().map(|&l| view.side_of[l]).collect()
}

/// Ranks side sequences within the class of the side marginal of `q`.
fn side_indexer(q: &JointType, view: &DecoderView) -> Result<GroupedMultiset> {
    let mut counts = vec![0u32; view.side_alphabet.joint_size()];
    for (a, &c) in q.counts().iter().enumerate() {
        counts[view.side_of[a]] += c;
    }
    class_indexer(&JointType::new(counts))
}

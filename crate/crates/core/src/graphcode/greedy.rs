//! First-fit vertex coloring in class-rank order.

use super::{budget_u64, checked_class_size, degree_budget, TypeColoring};
use crate::network::SourceNetwork;
use crate::typekit::{class_indexer, JointType, ShellIndex};
use crate::Result;

/// Colors `G(Q)` vertex by vertex in ascending class rank, each vertex
/// taking the smallest color unused by its already-colored neighbors.
pub fn color_greedy(q: &JointType, sn: &SourceNetwork, cap: u64) -> Result<TypeColoring> {
    let size = checked_class_size(q, cap)?;
    let budget = budget_u64(degree_budget(q, sn)?)?;
    let indexer = class_indexer(q)?;
    let mut colors = vec![u32::MAX; size];
    // stamp[c] == r marks color c as taken around vertex r
    let mut stamp = vec![u64::MAX; (budget as usize).min(size) + 1];
    let mut used = 0u32;
    for r in 0..size as u64 {
        let joint = indexer.unrank(r)?;
        for (j, view) in sn.views().iter().enumerate() {
            let side = joint.iter().map(|&l| view.side_of[l]).collect();
            let shell = ShellIndex::from_side_letters(side, q, sn, j)?;
            if shell.size() == 1 {
                continue;
            }
            for s in 0..shell.size() {
                let ry = indexer.rank(&shell.unrank_joint(s)?)?;
                if ry < r {
                    stamp[colors[ry as usize] as usize] = r;
                }
            }
        }
        let c = stamp.iter().position(|&t| t != r).expect("a free color") as u32;
        colors[r as usize] = c;
        used = used.max(c + 1);
    }
    Ok(TypeColoring {
        q: q.clone(),
        colors,
        colors_used: used,
        budget,
    })
}

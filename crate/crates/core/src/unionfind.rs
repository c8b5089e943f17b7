//! Two-pass 4-connected labeling of a square cell grid.

use alloc::vec;
use alloc::vec::Vec;

pub(crate) const NO_LABEL: u32 = u32::MAX;

fn find(parent: &mut [u32], mut i: u32) -> u32 {
    let mut root = i;
    while parent[root as usize] != root {
        root = parent[root as usize];
    }
    while parent[i as usize] != root {
        let next = parent[i as usize];
        parent[i as usize] = root;
        i = next;
    }
    root
}

fn union(parent: &mut [u32], a: u32, b: u32) {
    let ra = find(parent, a);
    let rb = find(parent, b);
    if ra == rb {
        return;
    }
    // smaller index wins so roots are the row-major first cell
    if ra < rb {
        parent[rb as usize] = ra;
    } else {
        parent[ra as usize] = rb;
    }
}

/// Labels the 4-connected components of the cells selected by `member` on a
/// `width × height` grid stored row-major. With `wrap` the grid is treated as
/// a torus. Returns dense labels numbered by the row-major order of each
/// component's first cell, [`NO_LABEL`] for non-members, and the label count.
pub(crate) fn label_components<F>(
    width: usize,
    height: usize,
    wrap: bool,
    member: F,
) -> (Vec<u32>, u32)
where
    F: Fn(usize) -> bool,
{
    let n = width * height;
    assert!(n < NO_LABEL as usize, "grid too large for u32 labels");
    let mut parent: Vec<u32> = vec![NO_LABEL; n];
    for row in 0..height {
        for col in 0..width {
            let idx = row * width + col;
            if !member(idx) {
                continue;
            }
            parent[idx] = idx as u32;
            if col > 0 && parent[idx - 1] != NO_LABEL {
                union(&mut parent, idx as u32, (idx - 1) as u32);
            }
            if row > 0 && parent[idx - width] != NO_LABEL {
                union(&mut parent, idx as u32, (idx - width) as u32);
            }
        }
    }
    if wrap {
        for row in 0..height {
            let a = row * width;
            let b = a + width - 1;
            if parent[a] != NO_LABEL && parent[b] != NO_LABEL {
                union(&mut parent, a as u32, b as u32);
            }
        }
        for col in 0..width {
            let a = col;
            let b = (height - 1) * width + col;
            if parent[a] != NO_LABEL && parent[b] != NO_LABEL {
                union(&mut parent, a as u32, b as u32);
            }
        }
    }

    for idx in 0..n {
        if parent[idx] != NO_LABEL {
            parent[idx] = find(&mut parent, idx as u32);
        }
    }
    // Roots are minimal indices, so a root is relabeled before any other cell
    // of its component reads it.
    let mut next = 0u32;
    for idx in 0..n {
        let p = parent[idx];
        if p == NO_LABEL {
            continue;
        }
        if p as usize == idx {
            parent[idx] = next;
            next += 1;
        } else {
            parent[idx] = parent[p as usize];
        }
    }
    (parent, next)
}

//! Canonical forms for fans up to unimodular equivalence and relabeling, and
//! exhaustive enumeration of small fans.

use std::collections::BTreeSet;

use super::{v2, Fan, Vec2};
use crate::Coord;

impl Fan {
    /// Canonical representative of the equivalence class of this fan under
    /// unimodular maps, rotation of the ray labels and reflection.
    ///
    /// The candidate (rotation, reflection) minimizing the self-intersection
    /// profile lexicographically wins; ties are broken by the normalized ray
    /// list, where normalization maps the first two rays of the candidate
    /// order to (1,0), (0,1).
    pub fn canonical_form(&self) -> Fan {
        let d = self.ray_count();
        let mut best: Option<(Vec<Coord>, Vec<Vec2>)> = None;
        for reflected in [false, true] {
            for rot in 0..d {
                let seq_idx: Vec<usize> = (0..d)
                    .map(|k| if reflected { (rot + d - k) % d } else { (rot + k) % d })
                    .collect();
                let prof: Vec<Coord> = seq_idx.iter().map(|&i| -self.alpha(i)).collect();
                if let Some((bp, _)) = &best {
                    if prof > *bp {
                        continue;
                    }
                }
                let rays = normalize_rays(&seq_idx.iter().map(|&i| self.ray(i)).collect::<Vec<_>>());
                let key = (prof, rays);
                if best.as_ref().is_none_or(|b| key < *b) {
                    best = Some(key);
                }
            }
        }
        let (_, rays) = best.expect("fan has at least one candidate ordering");
        Fan::validate(rays).expect("normalized candidate is a valid fan")
    }
}

/// Apply the unimodular map sending (rays[0], rays[1]) to ((1,0), (0,1)).
/// For a reversed (clockwise) sequence the map has determinant -1, which
/// restores the counterclockwise orientation.
fn normalize_rays(rays: &[Vec2]) -> Vec<Vec2> {
    let (a, b) = (rays[0], rays[1]);
    let det = a.det(b);
    debug_assert!(det.abs() == 1, "first two rays of a candidate are adjacent");
    // inverse of the column matrix [a b], scaled by its determinant sign
    let m = [[b.y / det, -b.x / det], [-a.y / det, a.x / det]];
    rays.iter()
        .map(|r| v2(m[0][0] * r.x + m[0][1] * r.y, m[1][0] * r.x + m[1][1] * r.y))
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CensusFilter {
    All,
    /// Keep fans whose anticanonical class is ample.
    Fano,
}

/// All valid fans with at most `max_rays` rays whose canonical form has
/// coordinates bounded by `coord_bound`, up to equivalence. Deterministic,
/// sorted by (ray count, profile, rays).
///
/// Every equivalence class within the bound is reached: the canonical form
/// itself starts with the rays (1,0), (0,1), so it appears as a search path.
pub fn census(max_rays: usize, coord_bound: Coord, filter: CensusFilter) -> Vec<Fan> {
    assert!(max_rays >= 3, "census needs max_rays >= 3");
    assert!(coord_bound >= 1, "census needs coord_bound >= 1");
    let mut candidates: Vec<Vec2> = Vec::new();
    for x in -coord_bound..=coord_bound {
        for y in -coord_bound..=coord_bound {
            let v = v2(x, y);
            if (x, y) != (0, 0) && v.is_primitive() {
                candidates.push(v);
            }
        }
    }
    let mut search = Search {
        candidates,
        max_rays,
        coord_bound,
        filter,
        seen: BTreeSet::new(),
        found: Vec::new(),
    };
    let mut stack = vec![v2(1, 0), v2(0, 1)];
    search.extend(&mut stack);
    search.found.sort_by(|a, b| {
        (a.ray_count(), a.self_intersections(), a.rays())
            .cmp(&(b.ray_count(), b.self_intersections(), b.rays()))
    });
    search.found
}

struct Search {
    candidates: Vec<Vec2>,
    max_rays: usize,
    coord_bound: Coord,
    filter: CensusFilter,
    seen: BTreeSet<Vec<Vec2>>,
    found: Vec<Fan>,
}

impl Search {
    fn extend(&mut self, stack: &mut Vec<Vec2>) {
        let anchor = v2(1, 0);
        let last = *stack.last().expect("stack never empty");
        if stack.len() >= 3 && last.det(anchor) == 1 {
            self.emit(stack);
        }
        if stack.len() == self.max_rays {
            return;
        }
        for i in 0..self.candidates.len() {
            let w = self.candidates[i];
            if last.det(w) == 1 && Vec2::ccw_less(anchor, last, w) {
                stack.push(w);
                self.extend(stack);
                stack.pop();
            }
        }
    }

    fn emit(&mut self, rays: &[Vec2]) {
        let fan = Fan::validate(rays.to_vec()).expect("search invariants give a valid fan");
        let keep = match self.filter {
            CensusFilter::All => true,
            CensusFilter::Fano => fan.self_intersections().iter().all(|&s| s >= -1),
        };
        if !keep {
            return;
        }
        let canon = fan.canonical_form();
        let b = self.coord_bound;
        if !canon.rays().iter().all(|r| r.x.abs() <= b && r.y.abs() <= b) {
            return;
        }
        if self.seen.insert(canon.rays().to_vec()) {
            self.found.push(canon);
        }
    }
}

//! Structural validation of stacky fan data, including the wall-pairing
//! test for convex full-dimensional support.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::exactlin::{
    dot, extreme_rays, invert, is_zero_vec, rank, solve_in_columns, to_rat_vec, ExactlinError,
    FgAbelianGroup, Rat, RatVector,
};

use super::Wall;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
}

impl ValidationReport {
    fn push(&mut self, name: &str, pass: bool, detail: Option<String>) {
        self.checks.push(Check {
            name: name.to_string(),
            pass,
            detail,
        });
    }

    fn ok(&mut self, name: &str) {
        self.push(name, true, None);
    }

    fn fail(&mut self, name: &str, detail: String) {
        self.push(name, false, Some(detail));
    }

    pub fn is_valid(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

impl std::fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for c in &self.checks {
            write!(f, "VALIDATE {} {}", c.name, if c.pass { "PASS" } else { "FAIL" })?;
            if let Some(d) = &c.detail {
                write!(f, ": {d}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

fn ray_q_of(group: &FgAbelianGroup, ray: &[BigInt]) -> RatVector {
    to_rat_vec(&ray[..group.rank()])
}

/// Validates stacky fan data. Reports pass/fail per invariant; never
/// panics on bad input. Later checks that depend on earlier ones are
/// skipped once a prerequisite fails.
pub fn validate_stacky_data(
    group: &FgAbelianGroup,
    rays: &[Vec<BigInt>],
    max_cones: &[Vec<usize>],
) -> ValidationReport {
    let mut report = ValidationReport::default();
    let n = rays.len();
    let d = group.rank();

    // Element lengths.
    if let Some(i) = rays.iter().position(|r| r.len() != group.dim()) {
        report.fail(
            "ray-lengths",
            format!("ray {i} has length {} != {}", rays[i].len(), group.dim()),
        );
        return report;
    }
    report.ok("ray-lengths");

    // Cone index sanity.
    let mut cones: Vec<Vec<usize>> = Vec::new();
    for (k, cone) in max_cones.iter().enumerate() {
        let mut c = cone.clone();
        c.sort_unstable();
        c.dedup();
        if c.len() != cone.len() || c.iter().any(|&i| i >= n) || c.is_empty() {
            report.fail("cone-indices", format!("cone {k} has bad indices {cone:?}"));
            return report;
        }
        cones.push(c);
    }
    if cones.is_empty() {
        report.fail("cone-indices", "no maximal cones given".to_string());
        return report;
    }
    report.ok("cone-indices");

    let mut sorted_cones = cones.clone();
    sorted_cones.sort();
    sorted_cones.dedup();
    if sorted_cones.len() != cones.len() {
        report.fail("cones-distinct", "duplicate maximal cone".to_string());
    } else {
        report.ok("cones-distinct");
    }

    // Nonzero rays (in N tensor Q).
    let ray_q: Vec<RatVector> = rays.iter().map(|r| ray_q_of(group, r)).collect();
    match ray_q.iter().position(|r| is_zero_vec(r)) {
        Some(i) => report.fail("rays-nonzero", format!("ray {i} is torsion")),
        None => report.ok("rays-nonzero"),
    }

    // Distinct 1-cones: no ray is a positive multiple of another.
    let mut distinct = true;
    'outer: for i in 0..n {
        for j in i + 1..n {
            if is_zero_vec(&ray_q[i]) || is_zero_vec(&ray_q[j]) {
                continue;
            }
            if let Some(c) = proportionality(&ray_q[i], &ray_q[j]) {
                if c > Rat::zero() {
                    report.fail(
                        "rays-distinct",
                        format!("rays {i} and {j} generate the same 1-cone"),
                    );
                    distinct = false;
                    break 'outer;
                }
            }
        }
    }
    if distinct {
        report.ok("rays-distinct");
    }

    // Every ray used by some cone.
    match (0..n).find(|i| !cones.iter().any(|c| c.contains(i))) {
        Some(i) => report.fail("rays-used", format!("ray {i} lies in no maximal cone")),
        None => report.ok("rays-used"),
    }

    // Simplicial cones.
    let mut simplicial = true;
    for (k, cone) in cones.iter().enumerate() {
        let rs: Vec<RatVector> = cone.iter().map(|&i| ray_q[i].clone()).collect();
        if rank(&rs) != cone.len() {
            report.fail("simplicial", format!("cone {k} ({cone:?}) is not simplicial"));
            simplicial = false;
        }
    }
    if simplicial {
        report.ok("simplicial");
    }

    // Finite cokernel: rho tensor Q surjective.
    if rank(&ray_q) != d {
        report.fail(
            "finite-cokernel",
            "rays do not span N tensor Q (infinite cokernel)".to_string(),
        );
    } else {
        report.ok("finite-cokernel");
    }

    // Top-dimensional maximal cones (the fan must have torus-fixed points).
    let mut top = true;
    for (k, cone) in cones.iter().enumerate() {
        if cone.len() != d {
            report.fail(
                "top-dimensional",
                format!("cone {k} ({cone:?}) has dimension {} != {d}", cone.len()),
            );
            top = false;
        }
    }
    if top {
        report.ok("top-dimensional");
    }

    if !report.is_valid() {
        return report;
    }

    // Wall pairing: every codimension-1 face of a top cone is shared by
    // exactly one other top cone, with the off-wall rays strictly on
    // opposite sides, or lies on the support boundary with every ray of the
    // fan weakly on one side.
    let mut wall_ok = true;
    let mut convex_ok = true;
    for (s, cone) in cones.iter().enumerate() {
        for &j in cone {
            let facet: Vec<usize> = cone.iter().copied().filter(|&i| i != j).collect();
            let h = match wall_normal(d, &facet, &ray_q, j) {
                Some(h) => h,
                None => {
                    report.fail(
                        "wall-pairing",
                        format!("cannot orient wall {facet:?} of cone {cone:?}"),
                    );
                    wall_ok = false;
                    continue;
                }
            };
            let partners: Vec<usize> = cones
                .iter()
                .enumerate()
                .filter(|(t, other)| *t != s && facet.iter().all(|i| other.contains(i)))
                .map(|(t, _)| t)
                .collect();
            match partners.len() {
                0 => {
                    // Boundary wall: all rays weakly on the j side.
                    if ray_q.iter().any(|r| dot(&h, r) < Rat::zero()) {
                        report.fail(
                            "support-convex",
                            format!(
                                "support not convex: wall {facet:?} of cone {cone:?} is unmatched \
                                 but rays lie on both sides"
                            ),
                        );
                        convex_ok = false;
                    }
                }
                1 => {
                    let t = partners[0];
                    let j_p = *cones[t].iter().find(|i| !facet.contains(i)).unwrap();
                    if dot(&h, &ray_q[j_p]) >= Rat::zero() {
                        report.fail(
                            "wall-pairing",
                            format!("cones {s} and {t} overlap across wall {facet:?}"),
                        );
                        wall_ok = false;
                    }
                }
                _ => {
                    report.fail(
                        "wall-pairing",
                        format!("wall {facet:?} shared by more than two top cones"),
                    );
                    wall_ok = false;
                }
            }
        }
    }
    if wall_ok {
        report.ok("wall-pairing");
    }
    if convex_ok {
        report.ok("support-convex");
    }

    // Pairwise proper intersections: cone(s1) cap cone(s2) = cone(s1 cap s2).
    // Pairs meeting along an index wall were handled above.
    let mut proper = true;
    for s1 in 0..cones.len() {
        for s2 in s1 + 1..cones.len() {
            let common: Vec<usize> = cones[s1]
                .iter()
                .copied()
                .filter(|i| cones[s2].contains(i))
                .collect();
            if common.len() + 1 >= d {
                continue;
            }
            if !proper_intersection(d, &cones[s1], &cones[s2], &common, &ray_q) {
                report.fail(
                    "fan-intersections",
                    format!("cones {:?} and {:?} intersect improperly", cones[s1], cones[s2]),
                );
                proper = false;
            }
        }
    }
    if proper {
        report.ok("fan-intersections");
    }

    report
}

/// Proportionality constant `c` with `b = c a`, if one exists.
fn proportionality(a: &[Rat], b: &[Rat]) -> Option<Rat> {
    let k = a.iter().position(|x| !x.is_zero())?;
    let c = &b[k] / &a[k];
    for i in 0..a.len() {
        if &a[i] * &c != b[i] {
            return None;
        }
    }
    Some(c)
}

/// A linear form vanishing on the facet rays and positive on ray `j`;
/// `None` when the facet does not span a hyperplane through `ray_q[j]`'s
/// complement (degenerate input).
fn wall_normal(d: usize, facet: &[usize], ray_q: &[RatVector], j: usize) -> Option<RatVector> {
    // Nullspace of the facet-ray rows is 1-dimensional for a simplicial top
    // cone facet.
    let rows: Vec<RatVector> = facet.iter().map(|&i| ray_q[i].clone()).collect();
    let h = one_dim_nullspace(d, &rows)?;
    let v = dot(&h, &ray_q[j]);
    if v.is_zero() {
        return None;
    }
    if v < Rat::zero() {
        Some(h.iter().map(|x| -x).collect())
    } else {
        Some(h)
    }
}

fn one_dim_nullspace(d: usize, rows: &[RatVector]) -> Option<RatVector> {
    // Gauss-Jordan; expect nullity exactly 1.
    let mut work: Vec<RatVector> = rows.to_vec();
    let mut pivots: Vec<usize> = Vec::new();
    let mut r = 0;
    for col in 0..d {
        let Some(p) = (r..work.len()).find(|&i| !work[i][col].is_zero()) else {
            continue;
        };
        work.swap(r, p);
        let pv = work[r][col].clone();
        for x in work[r].iter_mut() {
            *x = &*x / &pv;
        }
        for i in 0..work.len() {
            if i != r && !work[i][col].is_zero() {
                let f = work[i][col].clone();
                for c2 in 0..d {
                    work[i][c2] = &work[i][c2] - &f * &work[r][c2];
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    if r + 1 != d {
        return None;
    }
    let free_col = (0..d).find(|c| !pivots.contains(c))?;
    let mut v = vec![Rat::zero(); d];
    v[free_col] = Rat::from_integer(1.into());
    for (ri, &pc) in pivots.iter().enumerate() {
        v[pc] = -work[ri][free_col].clone();
    }
    Some(v)
}

/// Checks `cone(c1) cap cone(c2) = cone(common)` for top-dimensional
/// simplicial cones, by enumerating extreme rays of the intersection.
fn proper_intersection(
    d: usize,
    c1: &[usize],
    c2: &[usize],
    common: &[usize],
    ray_q: &[RatVector],
) -> bool {
    let mut rows: Vec<RatVector> = Vec::new();
    for cone in [c1, c2] {
        let basis: Vec<RatVector> = cone.iter().map(|&i| ray_q[i].clone()).collect();
        let cols: Vec<RatVector> = (0..d)
            .map(|i| basis.iter().map(|b| b[i].clone()).collect())
            .collect();
        let Some(inv) = invert(&cols) else {
            return false;
        };
        rows.extend(inv);
    }
    let rays = match extreme_rays(d, &rows) {
        Ok(r) => r,
        Err(ExactlinError::NotPointed) => return false,
        Err(_) => return false,
    };
    for ray in rays {
        let v = to_rat_vec(&ray);
        let cols: Vec<RatVector> = common.iter().map(|&i| ray_q[i].clone()).collect();
        match solve_in_columns(&cols, &v) {
            Some(coeffs) if coeffs.iter().all(|c| c >= &Rat::zero()) => {}
            _ => return false,
        }
    }
    true
}

/// Ordered walls of a fan whose data already passed validation.
pub(super) fn find_walls(cones: &[Vec<usize>]) -> Vec<Wall> {
    let mut walls = Vec::new();
    for (s, cone) in cones.iter().enumerate() {
        for &j in cone {
            let facet: Vec<usize> = cone.iter().copied().filter(|&i| i != j).collect();
            for (t, other) in cones.iter().enumerate() {
                if t == s || !facet.iter().all(|i| other.contains(i)) {
                    continue;
                }
                let j_p = *other.iter().find(|i| !facet.contains(i)).unwrap();
                walls.push(Wall {
                    sigma: s,
                    sigma_p: t,
                    j,
                    j_p,
                });
            }
        }
    }
    walls.sort_by_key(|w| (w.sigma, w.sigma_p, w.j));
    walls
}

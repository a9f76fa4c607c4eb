//! Incremental 3D convex hull with exact rational orientation tests.

use std::collections::BTreeSet;

use num_traits::{Signed, Zero};

use crate::algebra::Rat;

pub type Point3 = [Rat; 3];

fn sub(a: &Point3, b: &Point3) -> Point3 {
    [&a[0] - &b[0], &a[1] - &b[1], &a[2] - &b[2]]
}

fn cross(a: &Point3, b: &Point3) -> Point3 {
    [
        &a[1] * &b[2] - &a[2] * &b[1],
        &a[2] * &b[0] - &a[0] * &b[2],
        &a[0] * &b[1] - &a[1] * &b[0],
    ]
}

fn dot(a: &Point3, b: &Point3) -> Rat {
    &a[0] * &b[0] + &a[1] * &b[1] + &a[2] * &b[2]
}

/// `det(b - a, c - a, d - a)`: positive when `d` lies on the side of the
/// plane `abc` that `(b - a) x (c - a)` points to.
pub fn orient3d(a: &Point3, b: &Point3, c: &Point3, d: &Point3) -> Rat {
    dot(&cross(&sub(b, a), &sub(c, a)), &sub(d, a))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Degeneracy {
    /// Fewer than four input points.
    TooFewPoints,
    /// All points coincide, are collinear or are coplanar; the value is
    /// the dimension of their affine hull.
    Flat(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hull {
    /// Triangles as indices into the input, oriented so that
    /// `orient3d(face, p) <= 0` for every input point `p`.
    pub faces: Vec<[usize; 3]>,
    pub degenerate: Option<Degeneracy>,
}

impl Hull {
    /// Indices of points used by some face, ascending.
    pub fn vertices(&self) -> Vec<usize> {
        let set: BTreeSet<usize> = self.faces.iter().flatten().copied().collect();
        set.into_iter().collect()
    }

    /// Exact check that every point is inside or on every face.
    pub fn contains_all(&self, points: &[Point3]) -> bool {
        self.faces.iter().all(|f| {
            points
                .iter()
                .all(|p| !orient3d(&points[f[0]], &points[f[1]], &points[f[2]], p).is_positive())
        })
    }
}

fn affine_dimension_prefix(points: &[Point3]) -> Result<[usize; 4], Degeneracy> {
    let a = 0;
    let Some(b) = (1..points.len()).find(|&i| points[i] != points[a]) else {
        return Err(Degeneracy::Flat(0));
    };
    let ab = sub(&points[b], &points[a]);
    let Some(c) = (0..points.len()).find(|&i| {
        cross(&ab, &sub(&points[i], &points[a])).iter().any(|x| !x.is_zero())
    }) else {
        return Err(Degeneracy::Flat(1));
    };
    let Some(d) = (0..points.len())
        .find(|&i| !orient3d(&points[a], &points[b], &points[c], &points[i]).is_zero())
    else {
        return Err(Degeneracy::Flat(2));
    };
    Ok([a, b, c, d])
}

/// Convex hull of `points`. Points are inserted in input order; a point is
/// added when it is strictly outside some face, and then every face it sees
/// or lies in the plane of is replaced, which keeps all new faces
/// non-degenerate.
pub fn convex_hull_3d(points: &[Point3]) -> Hull {
    if points.len() < 4 {
        return Hull {
            faces: Vec::new(),
            degenerate: Some(Degeneracy::TooFewPoints),
        };
    }
    let [a, b, c, d] = match affine_dimension_prefix(points) {
        Ok(t) => t,
        Err(deg) => {
            return Hull {
                faces: Vec::new(),
                degenerate: Some(deg),
            }
        }
    };
    let orient = |f: &[usize; 3], p: usize| {
        orient3d(&points[f[0]], &points[f[1]], &points[f[2]], &points[p])
    };
    let mut faces: Vec<[usize; 3]> = Vec::new();
    for (f, opposite) in [([a, b, c], d), ([a, b, d], c), ([a, c, d], b), ([b, c, d], a)] {
        faces.push(if orient(&f, opposite).is_positive() {
            [f[0], f[2], f[1]]
        } else {
            f
        });
    }
    for p in 0..points.len() {
        if [a, b, c, d].contains(&p) {
            continue;
        }
        let signs: Vec<Rat> = faces.iter().map(|f| orient(f, p)).collect();
        if !signs.iter().any(|s| s.is_positive()) {
            continue;
        }
        let visible: Vec<bool> = signs.iter().map(|s| !s.is_negative()).collect();
        let edges: BTreeSet<(usize, usize)> = faces
            .iter()
            .zip(&visible)
            .filter(|(_, &v)| v)
            .flat_map(|(f, _)| [(f[0], f[1]), (f[1], f[2]), (f[2], f[0])])
            .collect();
        let mut next: Vec<[usize; 3]> = faces
            .iter()
            .zip(&visible)
            .filter(|(_, &v)| !v)
            .map(|(f, _)| *f)
            .collect();
        for &(u, v) in &edges {
            if !edges.contains(&(v, u)) {
                next.push([u, v, p]);
            }
        }
        faces = next;
    }
    Hull {
        faces,
        degenerate: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{rat, rat_int};

    fn pt(x: i64, y: i64, z: i64) -> Point3 {
        [rat_int(x), rat_int(y), rat_int(z)]
    }

    #[test]
    fn tetrahedron() {
        let pts = vec![pt(0, 0, 0), pt(1, 0, 0), pt(0, 1, 0), pt(0, 0, 1)];
        let h = convex_hull_3d(&pts);
        assert_eq!(h.faces.len(), 4);
        assert!(h.contains_all(&pts));
    }

    #[test]
    fn cube_with_centroid() {
        let mut pts = Vec::new();
        for x in 0..2 {
            for y in 0..2 {
                for z in 0..2 {
                    pts.push(pt(x, y, z));
                }
            }
        }
        pts.push([rat(1, 2), rat(1, 2), rat(1, 2)]);
        let h = convex_hull_3d(&pts);
        assert_eq!(h.faces.len(), 12);
        assert!(h.contains_all(&pts));
        assert!(!h.vertices().contains(&8));
        let centroid = &pts[8];
        assert!(h.faces.iter().all(|f| orient3d(&pts[f[0]], &pts[f[1]], &pts[f[2]], centroid).is_negative()));
    }

    #[test]
    fn grid_points_with_collinear_runs() {
        let mut pts = Vec::new();
        for x in 0..4 {
            for y in 0..3 {
                for z in 0..3 {
                    pts.push(pt(x, y, z));
                }
            }
        }
        let h = convex_hull_3d(&pts);
        assert!(h.degenerate.is_none());
        assert!(h.contains_all(&pts));
        for f in &h.faces {
            let n = cross(&sub(&pts[f[1]], &pts[f[0]]), &sub(&pts[f[2]], &pts[f[0]]));
            assert!(n.iter().any(|c| !c.is_zero()));
        }
    }

    #[test]
    fn degenerate_inputs_flagged() {
        assert_eq!(
            convex_hull_3d(&[pt(0, 0, 0), pt(1, 0, 0)]).degenerate,
            Some(Degeneracy::TooFewPoints)
        );
        let plane = vec![pt(0, 0, 0), pt(1, 0, 0), pt(0, 1, 0), pt(1, 1, 0), pt(2, 3, 0)];
        assert_eq!(convex_hull_3d(&plane).degenerate, Some(Degeneracy::Flat(2)));
        let line = vec![pt(0, 0, 0), pt(1, 1, 1), pt(2, 2, 2), pt(3, 3, 3)];
        assert_eq!(convex_hull_3d(&line).degenerate, Some(Degeneracy::Flat(1)));
        let same = vec![pt(1, 1, 1); 5];
        assert_eq!(convex_hull_3d(&same).degenerate, Some(Degeneracy::Flat(0)));
    }
}

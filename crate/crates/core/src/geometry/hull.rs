//! Convex hulls in one to three dimensions with exact orientation predicates.

use robust::{orient2d, orient3d, Coord, Coord3D};
use serde::{Deserialize, Serialize};

use super::HPolytope;
use crate::error::{Error, Result};

/// Extreme points of a convex polytope. In 2-D the vertices are in
/// counter-clockwise order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VPolytope {
    vertices: Vec<Vec<f64>>,
    /// Set when the hull has lower dimension than the ambient space.
    #[serde(default)]
    degenerate: bool,
}

impl VPolytope {
    pub fn vertices(&self) -> &[Vec<f64>] {
        &self.vertices
    }

    pub fn dim(&self) -> usize {
        self.vertices[0].len()
    }

    pub fn is_degenerate(&self) -> bool {
        self.degenerate
    }

    pub fn to_hpolytope(&self) -> Result<HPolytope> {
        if self.degenerate {
            return Err(Error::RankDeficient);
        }
        let v = &self.vertices;
        match self.dim() {
            1 => HPolytope::new(vec![vec![1.0], vec![-1.0]], vec![v[1][0], -v[0][0]]),
            2 => {
                let k = v.len();
                let mut h = Vec::with_capacity(k);
                let mut d = Vec::with_capacity(k);
                for i in 0..k {
                    let (a, b) = (&v[i], &v[(i + 1) % k]);
                    let n = vec![b[1] - a[1], a[0] - b[0]];
                    d.push(support(&n, v));
                    h.push(n);
                }
                HPolytope::normalized(h, d)
            }
            _ => {
                let pts: Vec<Coord3D<f64>> = v.iter().map(|p| c3(p)).collect();
                let hull = Hull3::build(&pts).ok_or(Error::RankDeficient)?;
                let mut h = Vec::new();
                let mut d = Vec::new();
                for f in hull.plane_representatives() {
                    let [a, b, c] = hull.faces[f];
                    let n = cross(&sub3(&v[b], &v[a]), &sub3(&v[c], &v[a]));
                    d.push(support(&n, v));
                    h.push(n);
                }
                HPolytope::normalized(h, d)
            }
        }
    }

    /// SVG path data of a 2-D polygon.
    pub fn svg_path(&self) -> Option<String> {
        if self.dim() != 2 {
            return None;
        }
        let mut s = String::new();
        for (i, p) in self.vertices.iter().enumerate() {
            s.push_str(if i == 0 { "M " } else { " L " });
            s.push_str(&format!("{} {}", p[0], p[1]));
        }
        s.push_str(" Z");
        Some(s)
    }
}

fn support(n: &[f64], v: &[Vec<f64>]) -> f64 {
    v.iter()
        .map(|p| p.iter().zip(n).map(|(a, b)| a * b).sum::<f64>())
        .fold(f64::NEG_INFINITY, f64::max)
}

fn sub3(a: &[f64], b: &[f64]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn cross(a: &[f64; 3], b: &[f64; 3]) -> Vec<f64> {
    vec![
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn c2(x: f64, y: f64) -> Coord<f64> {
    Coord { x, y }
}

fn c3(p: &[f64]) -> Coord3D<f64> {
    Coord3D {
        x: p[0],
        y: p[1],
        z: p[2],
    }
}

/// Convex hull of a point set in dimension 1, 2 or 3.
pub fn vertex_hull(points: &[Vec<f64>]) -> Result<VPolytope> {
    let Some(first) = points.first() else {
        return Err(Error::invalid("hull of an empty point set"));
    };
    let m = first.len();
    if points.iter().any(|p| p.len() != m) {
        return Err(Error::dims("hull points differ in dimension"));
    }
    if m == 0 || m > 3 {
        return Err(Error::DimensionTooLarge { dim: m, cap: 3 });
    }
    if points.iter().flatten().any(|v| !v.is_finite()) {
        return Err(Error::invalid("hull points must be finite"));
    }
    let mut pts: Vec<Vec<f64>> = points.to_vec();
    pts.sort_by(|a, b| lex(a, b));
    pts.dedup();
    if pts.len() == 1 {
        return Ok(VPolytope {
            vertices: pts,
            degenerate: true,
        });
    }
    match m {
        1 => Ok(VPolytope {
            vertices: vec![pts[0].clone(), pts[pts.len() - 1].clone()],
            degenerate: false,
        }),
        2 => {
            let idx = chain(&pts.iter().map(|p| (p[0], p[1])).collect::<Vec<_>>());
            let degenerate = idx.len() < 3;
            Ok(VPolytope {
                vertices: idx.into_iter().map(|i| pts[i].clone()).collect(),
                degenerate,
            })
        }
        _ => hull3(pts),
    }
}

fn lex(a: &[f64], b: &[f64]) -> std::cmp::Ordering {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.total_cmp(y))
        .find(|o| o.is_ne())
        .unwrap_or(std::cmp::Ordering::Equal)
}

/// Andrew's monotone chain on lexicographically sorted, distinct points.
/// Returns CCW indices of extreme points; collinear input gives the two endpoints.
fn chain(p: &[(f64, f64)]) -> Vec<usize> {
    let n = p.len();
    if n < 3 {
        return (0..n).collect();
    }
    let turn = |a: usize, b: usize, c: usize| {
        orient2d(c2(p[a].0, p[a].1), c2(p[b].0, p[b].1), c2(p[c].0, p[c].1))
    };
    let mut lower: Vec<usize> = Vec::new();
    for i in 0..n {
        while lower.len() >= 2 && turn(lower[lower.len() - 2], lower[lower.len() - 1], i) <= 0.0 {
            lower.pop();
        }
        lower.push(i);
    }
    let mut upper: Vec<usize> = Vec::new();
    for i in (0..n).rev() {
        while upper.len() >= 2 && turn(upper[upper.len() - 2], upper[upper.len() - 1], i) <= 0.0 {
            upper.pop();
        }
        upper.push(i);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    if lower.len() == 2 && lower[0] == lower[1] {
        lower.pop();
    }
    lower
}

fn hull3(pts: Vec<Vec<f64>>) -> Result<VPolytope> {
    let cs: Vec<Coord3D<f64>> = pts.iter().map(|p| c3(p)).collect();
    if let Some(h) = Hull3::build(&cs) {
        let keep = h.extreme_vertices(cs.len());
        return Ok(VPolytope {
            vertices: keep.into_iter().map(|i| pts[i].clone()).collect(),
            degenerate: false,
        });
    }
    // Coplanar or collinear: hull in a coordinate projection that keeps the plane nondegenerate.
    for drop in [2usize, 1, 0] {
        let proj: Vec<(f64, f64)> = pts
            .iter()
            .map(|p| match drop {
                2 => (p[0], p[1]),
                1 => (p[0], p[2]),
                _ => (p[1], p[2]),
            })
            .collect();
        let mut order: Vec<usize> = (0..pts.len()).collect();
        order.sort_by(|&a, &b| {
            proj[a]
                .0
                .total_cmp(&proj[b].0)
                .then(proj[a].1.total_cmp(&proj[b].1))
        });
        let sorted: Vec<(f64, f64)> = order.iter().map(|&i| proj[i]).collect();
        let mut dedup_ok = true;
        for w in sorted.windows(2) {
            if w[0] == w[1] {
                dedup_ok = false;
            }
        }
        if !dedup_ok {
            continue;
        }
        let idx = chain(&sorted);
        if idx.len() >= 3 {
            return Ok(VPolytope {
                vertices: idx.into_iter().map(|i| pts[order[i]].clone()).collect(),
                degenerate: true,
            });
        }
    }
    // Collinear: lexicographic extremes are the segment endpoints.
    Ok(VPolytope {
        vertices: vec![pts[0].clone(), pts[pts.len() - 1].clone()],
        degenerate: true,
    })
}

/// Incremental 3-D hull. Faces are CCW seen from outside, so interior points
/// have positive `orient3d` against every face.
struct Hull3<'a> {
    pts: &'a [Coord3D<f64>],
    faces: Vec<[usize; 3]>,
}

impl<'a> Hull3<'a> {
    fn build(pts: &'a [Coord3D<f64>]) -> Option<Self> {
        let n = pts.len();
        if n < 4 {
            return None;
        }
        let i0 = 0;
        let i1 = 1;
        let collinear = |a: usize, b: usize, c: usize| {
            let (p, q, r) = (pts[a], pts[b], pts[c]);
            orient2d(c2(p.x, p.y), c2(q.x, q.y), c2(r.x, r.y)) == 0.0
                && orient2d(c2(p.x, p.z), c2(q.x, q.z), c2(r.x, r.z)) == 0.0
                && orient2d(c2(p.y, p.z), c2(q.y, q.z), c2(r.y, r.z)) == 0.0
        };
        let i2 = (2..n).find(|&k| !collinear(i0, i1, k))?;
        let i3 = (2..n).find(|&k| k != i2 && orient3d(pts[i0], pts[i1], pts[i2], pts[k]) != 0.0)?;
        let mut h = Hull3 {
            pts,
            faces: Vec::new(),
        };
        let tet = [i0, i1, i2, i3];
        for (a, b, c, o) in [(0, 1, 2, 3), (0, 1, 3, 2), (0, 2, 3, 1), (1, 2, 3, 0)] {
            let (a, b, c, o) = (tet[a], tet[b], tet[c], tet[o]);
            if orient3d(pts[a], pts[b], pts[c], pts[o]) > 0.0 {
                h.faces.push([a, b, c]);
            } else {
                h.faces.push([a, c, b]);
            }
        }
        for p in 0..n {
            if tet.contains(&p) {
                continue;
            }
            h.add(p);
        }
        Some(h)
    }

    fn visible(&self, f: &[usize; 3], p: usize) -> bool {
        orient3d(self.pts[f[0]], self.pts[f[1]], self.pts[f[2]], self.pts[p]) < 0.0
    }

    fn add(&mut self, p: usize) {
        let vis: Vec<bool> = self.faces.iter().map(|f| self.visible(f, p)).collect();
        if !vis.iter().any(|&v| v) {
            return;
        }
        let mut visible_edges = std::collections::HashSet::new();
        for (f, _) in self.faces.iter().zip(&vis).filter(|(_, v)| **v) {
            for k in 0..3 {
                visible_edges.insert((f[k], f[(k + 1) % 3]));
            }
        }
        let mut horizon = Vec::new();
        for (f, _) in self.faces.iter().zip(&vis).filter(|(_, v)| **v) {
            for k in 0..3 {
                let (a, b) = (f[k], f[(k + 1) % 3]);
                if !visible_edges.contains(&(b, a)) {
                    horizon.push((a, b));
                }
            }
        }
        let mut kept: Vec<[usize; 3]> = self
            .faces
            .iter()
            .zip(&vis)
            .filter(|(_, v)| !**v)
            .map(|(f, _)| *f)
            .collect();
        kept.extend(horizon.into_iter().map(|(a, b)| [a, b, p]));
        self.faces = kept;
    }

    /// Face index -> plane id, merging edge-adjacent coplanar faces.
    fn planes(&self) -> Vec<usize> {
        let nf = self.faces.len();
        let mut parent: Vec<usize> = (0..nf).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let nx = p[y];
                p[y] = r;
                y = nx;
            }
            r
        }
        let mut edge_face = std::collections::HashMap::new();
        for (i, f) in self.faces.iter().enumerate() {
            for k in 0..3 {
                edge_face.insert((f[k], f[(k + 1) % 3]), i);
            }
        }
        for (i, f) in self.faces.iter().enumerate() {
            for k in 0..3 {
                if let Some(&j) = edge_face.get(&(f[(k + 1) % 3], f[k])) {
                    let g = self.faces[j];
                    let opp = g.iter().copied().find(|v| !f.contains(v)).unwrap_or(g[0]);
                    if orient3d(
                        self.pts[f[0]],
                        self.pts[f[1]],
                        self.pts[f[2]],
                        self.pts[opp],
                    ) == 0.0
                    {
                        let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                        parent[a.max(b)] = a.min(b);
                    }
                }
            }
        }
        (0..nf).map(|i| find(&mut parent, i)).collect()
    }

    fn plane_representatives(&self) -> Vec<usize> {
        let planes = self.planes();
        let mut seen = std::collections::BTreeSet::new();
        (0..self.faces.len())
            .filter(|&i| seen.insert(planes[i]))
            .collect()
    }

    /// Input indices lying on at least three distinct facet planes, ascending.
    fn extreme_vertices(&self, n: usize) -> Vec<usize> {
        let planes = self.planes();
        let mut on: Vec<std::collections::BTreeSet<usize>> = vec![Default::default(); n];
        for (f, &pl) in self.faces.iter().zip(&planes) {
            for &v in f {
                on[v].insert(pl);
            }
        }
        (0..n).filter(|&i| on[i].len() >= 3).collect()
    }
}

/// Hull of all pairwise vertex sums.
pub fn minkowski_sum(p: &VPolytope, q: &VPolytope) -> Result<VPolytope> {
    if p.dim() != q.dim() {
        return Err(Error::dims("Minkowski sum operands differ in dimension"));
    }
    let sums: Vec<Vec<f64>> = p
        .vertices
        .iter()
        .flat_map(|a| {
            q.vertices
                .iter()
                .map(move |b| a.iter().zip(b).map(|(x, y)| x + y).collect())
        })
        .collect();
    vertex_hull(&sums)
}

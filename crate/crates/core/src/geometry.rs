//! Random network layout: Poisson base-station deployments, nearest-BS
//! association, user-centric disk clusters and the hexagonal partition used
//! by disjoint clustering.
//!
//! All coordinates are in meters and intensities in points per square meter.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point2D {
    pub x: f64,
    pub y: f64,
}

impl Point2D {
    pub const ORIGIN: Point2D = Point2D { x: 0.0, y: 0.0 };

    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn dist_sq(&self, other: &Point2D) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        dx * dx + dy * dy
    }

    pub fn dist(&self, other: &Point2D) -> f64 {
        self.dist_sq(other).sqrt()
    }

    pub fn norm(&self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

/// Axis-aligned rectangle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
}

impl Window {
    pub fn new(x_min: f64, x_max: f64, y_min: f64, y_max: f64) -> Result<Self> {
        let w = Self {
            x_min,
            x_max,
            y_min,
            y_max,
        };
        if !(w.width() > 0.0 && w.height() > 0.0) || !w.area().is_finite() {
            return Err(Error::invalid("window", "window must have positive finite area"));
        }
        Ok(w)
    }

    /// Square of half-width `half` centered at the origin.
    pub fn centered_square(half: f64) -> Result<Self> {
        Self::new(-half, half, -half, half)
    }

    pub fn width(&self) -> f64 {
        self.x_max - self.x_min
    }

    pub fn height(&self) -> f64 {
        self.y_max - self.y_min
    }

    pub fn area(&self) -> f64 {
        self.width() * self.height()
    }

    pub fn contains(&self, p: &Point2D) -> bool {
        p.x >= self.x_min && p.x <= self.x_max && p.y >= self.y_min && p.y <= self.y_max
    }

    fn corners(&self) -> Vec<Point2D> {
        vec![
            Point2D::new(self.x_min, self.y_min),
            Point2D::new(self.x_max, self.y_min),
            Point2D::new(self.x_max, self.y_max),
            Point2D::new(self.x_min, self.y_max),
        ]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Deployment {
    pub bs_points: Vec<Point2D>,
    pub user_points: Vec<Point2D>,
    pub window: Window,
    pub bs_intensity: f64,
    pub user_intensity: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClusterScheme {
    UserCentric,
    Disjoint,
}

impl ClusterScheme {
    pub const BOTH: [ClusterScheme; 2] = [ClusterScheme::UserCentric, ClusterScheme::Disjoint];

    pub fn label(&self) -> &'static str {
        match self {
            ClusterScheme::UserCentric => "user-centric",
            ClusterScheme::Disjoint => "disjoint",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cluster {
    /// Indices into `Deployment::bs_points`, ascending.
    pub member_bs: Vec<usize>,
    pub center: Point2D,
    pub radius: f64,
    pub scheme: ClusterScheme,
}

impl Cluster {
    pub fn len(&self) -> usize {
        self.member_bs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.member_bs.is_empty()
    }
}

/// Draw a homogeneous PPP of the given intensity on `window`.
pub fn sample_ppp(intensity: f64, window: &Window, seed: u64) -> Result<Vec<Point2D>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sample_ppp_with(intensity, window, &mut rng)
}

pub fn sample_ppp_with<R: Rng + ?Sized>(intensity: f64, window: &Window, rng: &mut R) -> Result<Vec<Point2D>> {
    if !(intensity > 0.0) || !intensity.is_finite() {
        return Err(Error::invalid("intensity", "intensity must be positive and finite"));
    }
    if !(window.area() > 0.0) {
        return Err(Error::invalid("window", "window must have positive area"));
    }
    let mean = intensity * window.area();
    let poisson = Poisson::new(mean).map_err(|e| Error::invalid("intensity", format!("{e}")))?;
    let count = poisson.sample(rng) as usize;
    Ok((0..count).map(|_| uniform_in_window(window, rng)).collect())
}

pub fn uniform_in_window<R: Rng + ?Sized>(window: &Window, rng: &mut R) -> Point2D {
    Point2D::new(
        window.x_min + window.width() * rng.random::<f64>(),
        window.y_min + window.height() * rng.random::<f64>(),
    )
}

/// Uniform grid over a point set supporting nearest-neighbor and range queries.
#[derive(Debug, Clone)]
pub struct SpatialGrid {
    origin: Point2D,
    cell: f64,
    nx: usize,
    ny: usize,
    buckets: Vec<Vec<usize>>,
}

impl SpatialGrid {
    /// Build a grid over `points`, sized so that cells hold about two points on average.
    pub fn new(points: &[Point2D], window: &Window) -> Self {
        let n = points.len().max(1) as f64;
        let cell = (2.0 * window.area() / n).sqrt().max(f64::MIN_POSITIVE);
        let nx = ((window.width() / cell).ceil() as usize).clamp(1, 4096);
        let ny = ((window.height() / cell).ceil() as usize).clamp(1, 4096);
        let cell = (window.width() / nx as f64).max(window.height() / ny as f64);
        let mut grid = Self {
            origin: Point2D::new(window.x_min, window.y_min),
            cell,
            nx,
            ny,
            buckets: vec![Vec::new(); nx * ny],
        };
        for (i, p) in points.iter().enumerate() {
            let (cx, cy) = grid.cell_of(p);
            grid.buckets[cy * nx + cx].push(i);
        }
        grid
    }

    fn cell_of(&self, p: &Point2D) -> (usize, usize) {
        let cx = ((p.x - self.origin.x) / self.cell).floor();
        let cy = ((p.y - self.origin.y) / self.cell).floor();
        (
            (cx.max(0.0) as usize).min(self.nx - 1),
            (cy.max(0.0) as usize).min(self.ny - 1),
        )
    }

    fn ring(&self, cx: usize, cy: usize, k: usize, mut visit: impl FnMut(usize)) {
        let (cx, cy, k) = (cx as isize, cy as isize, k as isize);
        for y in (cy - k)..=(cy + k) {
            if y < 0 || y >= self.ny as isize {
                continue;
            }
            let on_edge_row = y == cy - k || y == cy + k;
            let mut x = cx - k;
            while x <= cx + k {
                if x >= 0 && x < self.nx as isize {
                    for &i in &self.buckets[y as usize * self.nx + x as usize] {
                        visit(i);
                    }
                }
                x += if on_edge_row || k == 0 { 1 } else { 2 * k };
            }
        }
    }

    fn max_ring(&self) -> usize {
        self.nx.max(self.ny)
    }

    /// Index of the point nearest to `p`; ties go to the lowest index.
    pub fn nearest(&self, points: &[Point2D], p: &Point2D) -> Option<usize> {
        let (cx, cy) = self.cell_of(p);
        let mut best: Option<(f64, usize)> = None;
        for k in 0..=self.max_ring() {
            self.ring(cx, cy, k, |i| {
                let d = points[i].dist_sq(p);
                if best.is_none_or(|(bd, bi)| d < bd || (d == bd && i < bi)) {
                    best = Some((d, i));
                }
            });
            if let Some((bd, _)) = best {
                // anything in ring k+1 or beyond is at least k cells away
                let reach = k as f64 * self.cell;
                if bd < reach * reach {
                    break;
                }
            }
        }
        best.map(|(_, i)| i)
    }

    /// Indices of the `count` nearest points, nearest first (ties by index).
    pub fn k_nearest(&self, points: &[Point2D], p: &Point2D, count: usize) -> Vec<usize> {
        let count = count.min(points.len());
        if count == 0 {
            return Vec::new();
        }
        let (cx, cy) = self.cell_of(p);
        let mut found: Vec<(f64, usize)> = Vec::new();
        for k in 0..=self.max_ring() {
            self.ring(cx, cy, k, |i| found.push((points[i].dist_sq(p), i)));
            if found.len() >= count {
                found.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
                let reach = k as f64 * self.cell;
                if found[count - 1].0 < reach * reach {
                    break;
                }
            }
        }
        found.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        found.truncate(count);
        found.into_iter().map(|(_, i)| i).collect()
    }

    /// Indices of points within distance `r` of `p` (inclusive), ascending.
    pub fn within(&self, points: &[Point2D], p: &Point2D, r: f64) -> Vec<usize> {
        let mut out = Vec::new();
        let r2 = r * r;
        let lo_x = (((p.x - r - self.origin.x) / self.cell).floor().max(0.0) as usize).min(self.nx - 1);
        let hi_x = (((p.x + r - self.origin.x) / self.cell).floor().max(0.0) as usize).min(self.nx - 1);
        let lo_y = (((p.y - r - self.origin.y) / self.cell).floor().max(0.0) as usize).min(self.ny - 1);
        let hi_y = (((p.y + r - self.origin.y) / self.cell).floor().max(0.0) as usize).min(self.ny - 1);
        for y in lo_y..=hi_y {
            for x in lo_x..=hi_x {
                for &i in &self.buckets[y * self.nx + x] {
                    if points[i].dist_sq(p) <= r2 {
                        out.push(i);
                    }
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Visit points in rings of increasing grid distance until `stop(ring_reach)` returns true.
    fn expand(&self, p: &Point2D, mut visit: impl FnMut(usize), mut stop: impl FnMut(f64) -> bool) {
        let (cx, cy) = self.cell_of(p);
        for k in 0..=self.max_ring() {
            self.ring(cx, cy, k, &mut visit);
            if stop(k as f64 * self.cell) {
                break;
            }
        }
    }
}

/// Map each user to its nearest BS (ties to the lowest BS index).
pub fn associate_users(dep: &Deployment) -> Result<Vec<usize>> {
    if dep.bs_points.is_empty() {
        return Err(Error::EmptyNetwork);
    }
    let grid = SpatialGrid::new(&dep.bs_points, &dep.window);
    Ok(dep
        .user_points
        .iter()
        .map(|u| grid.nearest(&dep.bs_points, u).expect("non-empty"))
        .collect())
}

/// All BSs within distance `radius` of `user`. An empty result is reported as
/// [`Error::EmptyCluster`]; see [`user_centric_cluster_or_nearest`] for the fallback.
pub fn user_centric_cluster(dep: &Deployment, user: Point2D, radius: f64) -> Result<Cluster> {
    if !(radius > 0.0) {
        return Err(Error::invalid("radius", "cluster radius must be positive"));
    }
    let r2 = radius * radius;
    let member_bs: Vec<usize> = dep
        .bs_points
        .iter()
        .enumerate()
        .filter(|(_, b)| b.dist_sq(&user) <= r2)
        .map(|(i, _)| i)
        .collect();
    if member_bs.is_empty() {
        return Err(Error::EmptyCluster);
    }
    Ok(Cluster {
        member_bs,
        center: user,
        radius,
        scheme: ClusterScheme::UserCentric,
    })
}

/// User-centric cluster, falling back to the single nearest BS when the disk is empty.
pub fn user_centric_cluster_or_nearest(dep: &Deployment, user: Point2D, radius: f64) -> Result<Cluster> {
    match user_centric_cluster(dep, user, radius) {
        Err(Error::EmptyCluster) => {
            let nearest = dep
                .bs_points
                .iter()
                .enumerate()
                .min_by(|a, b| a.1.dist_sq(&user).total_cmp(&b.1.dist_sq(&user)))
                .map(|(i, _)| i)
                .ok_or(Error::EmptyNetwork)?;
            Ok(Cluster {
                member_bs: vec![nearest],
                center: user,
                radius,
                scheme: ClusterScheme::UserCentric,
            })
        }
        other => other,
    }
}

/// Hexagonal lattice partition of the plane. Hexagons are the Voronoi cells of
/// the triangular lattice spanned by `pitch·(1, 0)` and `pitch·(1/2, √3/2)`
/// shifted to `origin`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HexPartition {
    pub lattice_pitch: f64,
    pub equivalent_disk_radius: f64,
    pub origin: Point2D,
}

const SQRT3: f64 = 1.732_050_807_568_877_2;

/// Lattice coordinates of a hexagon.
pub type HexIndex = (i64, i64);

impl HexPartition {
    /// Partition whose hexagons have the same area as a disk of `radius`.
    pub fn from_disk_radius(radius: f64) -> Result<Self> {
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::invalid("radius", "disk radius must be positive"));
        }
        // π R² = (√3/2) pitch²
        let pitch = radius * (2.0 * std::f64::consts::PI / SQRT3).sqrt();
        Ok(Self {
            lattice_pitch: pitch,
            equivalent_disk_radius: radius,
            origin: Point2D::ORIGIN,
        })
    }

    pub fn hexagon_area(&self) -> f64 {
        0.5 * SQRT3 * self.lattice_pitch * self.lattice_pitch
    }

    /// Circumradius (center to vertex).
    pub fn circumradius(&self) -> f64 {
        self.lattice_pitch / SQRT3
    }

    pub fn center(&self, idx: HexIndex) -> Point2D {
        let (i, j) = (idx.0 as f64, idx.1 as f64);
        Point2D::new(
            self.origin.x + self.lattice_pitch * (i + 0.5 * j),
            self.origin.y + self.lattice_pitch * 0.5 * SQRT3 * j,
        )
    }

    /// Hexagon containing `p`. Boundaries are half-open: a point on a shared
    /// edge or vertex belongs to the hexagon for which it lies on the lower or
    /// left boundary, i.e. the candidate center with the largest `(y, x)`.
    pub fn locate(&self, p: &Point2D) -> HexIndex {
        let rx = (p.x - self.origin.x) / self.lattice_pitch;
        let ry = (p.y - self.origin.y) / self.lattice_pitch;
        let j0 = (ry * 2.0 / SQRT3).round() as i64;
        let i0 = (rx - 0.5 * j0 as f64).round() as i64;
        let tie_eps = 1e-12 * self.lattice_pitch * self.lattice_pitch;
        let mut best: Option<(f64, HexIndex, Point2D)> = None;
        for dj in -1..=1 {
            for di in -1..=1 {
                let idx = (i0 + di, j0 + dj);
                let c = self.center(idx);
                let d = c.dist_sq(p);
                best = match best {
                    None => Some((d, idx, c)),
                    Some((bd, bidx, bc)) => {
                        let tie_wins = (d - bd).abs() <= tie_eps && (c.y > bc.y || (c.y == bc.y && c.x > bc.x));
                        if d < bd - tie_eps || tie_wins {
                            Some((d, idx, c))
                        } else {
                            Some((bd, bidx, bc))
                        }
                    }
                };
            }
        }
        best.expect("nine candidates").1
    }

    /// Vertices of the hexagon, counter-clockwise.
    pub fn vertices(&self, idx: HexIndex) -> Vec<Point2D> {
        let c = self.center(idx);
        let r = self.circumradius();
        (0..6)
            .map(|k| {
                let a = std::f64::consts::FRAC_PI_6 + k as f64 * std::f64::consts::FRAC_PI_3;
                Point2D::new(c.x + r * a.cos(), c.y + r * a.sin())
            })
            .collect()
    }
}

/// Partition the deployment's BSs by hexagon. Only non-empty clusters are
/// returned, ordered by lattice index.
pub fn disjoint_clusters(dep: &Deployment, part: &HexPartition) -> Result<Vec<Cluster>> {
    if !(part.lattice_pitch > 0.0) {
        return Err(Error::invalid("lattice_pitch", "must be positive"));
    }
    let mut by_hex: std::collections::BTreeMap<(i64, i64), Vec<usize>> = Default::default();
    for (i, b) in dep.bs_points.iter().enumerate() {
        let idx = part.locate(b);
        by_hex.entry((idx.1, idx.0)).or_default().push(i);
    }
    Ok(by_hex
        .into_iter()
        .map(|((j, i), member_bs)| Cluster {
            member_bs,
            center: part.center((i, j)),
            radius: part.equivalent_disk_radius,
            scheme: ClusterScheme::Disjoint,
        })
        .collect())
}

/// Voronoi cell of `points[site]` clipped to `window`, as a convex polygon.
pub fn voronoi_cell(points: &[Point2D], grid: &SpatialGrid, site: usize, window: &Window) -> Vec<Point2D> {
    let s = points[site];
    let mut poly = window.corners();
    let max_r2 = std::cell::Cell::new(poly.iter().map(|v| v.dist_sq(&s)).fold(0.0, f64::max));
    grid.expand(
        &s,
        |i| {
            if i == site || poly.is_empty() {
                return;
            }
            let c = points[i];
            if c.dist_sq(&s) >= 4.0 * max_r2.get() {
                return;
            }
            // keep {x : (c - s)·x <= (|c|² - |s|²)/2}
            let n = Point2D::new(c.x - s.x, c.y - s.y);
            let off = 0.5 * (c.x * c.x + c.y * c.y - s.x * s.x - s.y * s.y);
            poly = clip_half_plane(&poly, n, off);
            max_r2.set(poly.iter().map(|v| v.dist_sq(&s)).fold(0.0, f64::max));
        },
        |reach| reach * reach >= 4.0 * max_r2.get(),
    );
    poly
}

fn clip_half_plane(poly: &[Point2D], n: Point2D, off: f64) -> Vec<Point2D> {
    let side = |p: &Point2D| n.x * p.x + n.y * p.y - off;
    let mut out = Vec::with_capacity(poly.len() + 1);
    for k in 0..poly.len() {
        let a = poly[k];
        let b = poly[(k + 1) % poly.len()];
        let (sa, sb) = (side(&a), side(&b));
        if sa <= 0.0 {
            out.push(a);
        }
        if (sa < 0.0 && sb > 0.0) || (sa > 0.0 && sb < 0.0) {
            let t = sa / (sa - sb);
            out.push(Point2D::new(a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)));
        }
    }
    out
}

pub fn polygon_area(poly: &[Point2D]) -> f64 {
    let n = poly.len();
    0.5 * (0..n)
        .map(|k| {
            let (a, b) = (poly[k], poly[(k + 1) % n]);
            a.x * b.y - b.x * a.y
        })
        .sum::<f64>()
        .abs()
}

/// Uniform point in a convex polygon (fan triangulation from the first vertex).
pub fn uniform_in_polygon<R: Rng + ?Sized>(poly: &[Point2D], rng: &mut R) -> Point2D {
    debug_assert!(poly.len() >= 3);
    let areas: Vec<f64> = (1..poly.len() - 1)
        .map(|k| polygon_area(&[poly[0], poly[k], poly[k + 1]]))
        .collect();
    let total: f64 = areas.iter().sum();
    let mut pick = rng.random::<f64>() * total;
    let mut tri = areas.len() - 1;
    for (k, a) in areas.iter().enumerate() {
        if pick < *a {
            tri = k;
            break;
        }
        pick -= a;
    }
    let (a, b, c) = (poly[0], poly[tri + 1], poly[tri + 2]);
    let (mut u, mut v) = (rng.random::<f64>(), rng.random::<f64>());
    if u + v > 1.0 {
        u = 1.0 - u;
        v = 1.0 - v;
    }
    Point2D::new(
        a.x + u * (b.x - a.x) + v * (c.x - a.x),
        a.y + u * (b.y - a.y) + v * (c.y - a.y),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dep(bs: Vec<Point2D>, users: Vec<Point2D>) -> Deployment {
        Deployment {
            bs_points: bs,
            user_points: users,
            window: Window::centered_square(1000.0).unwrap(),
            bs_intensity: 1e-6,
            user_intensity: 2e-6,
        }
    }

    #[test]
    fn ppp_rejects_bad_parameters() {
        let w = Window::centered_square(10.0).unwrap();
        assert!(sample_ppp(0.0, &w, 1).is_err());
        assert!(sample_ppp(-1.0, &w, 1).is_err());
        assert!(Window::new(0.0, 0.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn ppp_is_deterministic_and_inside() {
        let w = Window::new(-5.0, 15.0, 2.0, 7.0).unwrap();
        let a = sample_ppp(0.5, &w, 42).unwrap();
        let b = sample_ppp(0.5, &w, 42).unwrap();
        assert_eq!(a, b);
        assert!(a.iter().all(|p| w.contains(p)));
    }

    #[test]
    fn vanishing_intensity_gives_empty_set() {
        let w = Window::centered_square(1.0).unwrap();
        let empty = (0..100)
            .filter(|s| sample_ppp(1e-9, &w, *s).unwrap().is_empty())
            .count();
        assert_eq!(empty, 100);
    }

    #[test]
    fn single_bs_takes_all_users() {
        let d = dep(
            vec![Point2D::new(3.0, 4.0)],
            vec![Point2D::new(-100.0, 0.0), Point2D::new(500.0, 500.0)],
        );
        assert_eq!(associate_users(&d).unwrap(), vec![0, 0]);
    }

    #[test]
    fn association_tie_goes_to_lower_index() {
        let d = dep(
            vec![Point2D::new(10.0, 0.0), Point2D::new(-10.0, 0.0)],
            vec![Point2D::new(0.0, 0.0), Point2D::new(0.0, 7.0)],
        );
        assert_eq!(associate_users(&d).unwrap(), vec![0, 0]);
        let d = dep(vec![], vec![Point2D::ORIGIN]);
        assert_eq!(associate_users(&d), Err(Error::EmptyNetwork));
    }

    #[test]
    fn user_centric_cluster_edges() {
        let d = dep(
            vec![
                Point2D::new(100.0, 0.0),
                Point2D::new(0.0, 300.0),
                Point2D::new(900.0, 900.0),
            ],
            vec![],
        );
        assert_eq!(
            user_centric_cluster(&d, Point2D::ORIGIN, 50.0),
            Err(Error::EmptyCluster)
        );
        let c = user_centric_cluster(&d, Point2D::ORIGIN, 1e9).unwrap();
        assert_eq!(c.member_bs, vec![0, 1, 2]);
        let c = user_centric_cluster(&d, Point2D::ORIGIN, 300.0).unwrap();
        assert_eq!(c.member_bs, vec![0, 1]);
        let f = user_centric_cluster_or_nearest(&d, Point2D::ORIGIN, 50.0).unwrap();
        assert_eq!(f.member_bs, vec![0]);
        assert!(user_centric_cluster(&d, Point2D::ORIGIN, 0.0).is_err());
    }

    #[test]
    fn hex_area_matches_disk() {
        for r in [1.0, 250.0, 1234.5] {
            let h = HexPartition::from_disk_radius(r).unwrap();
            let disk = std::f64::consts::PI * r * r;
            assert!((h.hexagon_area() - disk).abs() <= 1e-9 * disk);
            let v = h.vertices((0, 0));
            assert!((polygon_area(&v) - disk).abs() <= 1e-9 * disk);
        }
    }

    #[test]
    fn hex_boundary_is_half_open() {
        let h = HexPartition::from_disk_radius(100.0).unwrap();
        let p = h.lattice_pitch;
        // midpoint of the vertical edge shared by (0,0) and (1,0)
        assert_eq!(h.locate(&Point2D::new(0.5 * p, 0.0)), (1, 0));
        // midpoint of the slanted edge shared by (0,0) and (0,1): upper hexagon wins
        let c = h.center((0, 1));
        assert_eq!(h.locate(&Point2D::new(0.5 * c.x, 0.5 * c.y)), (0, 1));
        // interior points
        assert_eq!(h.locate(&Point2D::new(0.49 * p, 0.0)), (0, 0));
        assert_eq!(h.locate(&h.center((-3, 2))), (-3, 2));
    }

    #[test]
    fn one_hexagon_holds_everything() {
        let d = dep(
            vec![
                Point2D::new(1.0, 2.0),
                Point2D::new(-30.0, 5.0),
                Point2D::new(10.0, -40.0),
            ],
            vec![],
        );
        let part = HexPartition::from_disk_radius(1000.0).unwrap();
        let cl = disjoint_clusters(&d, &part).unwrap();
        assert_eq!(cl.len(), 1);
        assert_eq!(cl[0].member_bs, vec![0, 1, 2]);
        assert_eq!(cl[0].center, Point2D::ORIGIN);
    }

    #[test]
    fn grid_queries_match_brute_force() {
        let w = Window::centered_square(500.0).unwrap();
        let pts = sample_ppp(1e-4, &w, 7).unwrap();
        let grid = SpatialGrid::new(&pts, &w);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let q = uniform_in_window(&w, &mut rng);
            let brute = (0..pts.len())
                .min_by(|&a, &b| pts[a].dist_sq(&q).total_cmp(&pts[b].dist_sq(&q)))
                .unwrap();
            assert_eq!(grid.nearest(&pts, &q), Some(brute));
            let mut all: Vec<usize> = (0..pts.len()).collect();
            all.sort_by(|&a, &b| pts[a].dist_sq(&q).total_cmp(&pts[b].dist_sq(&q)));
            assert_eq!(grid.k_nearest(&pts, &q, 5), all[..5].to_vec());
            let mut inside: Vec<usize> = (0..pts.len()).filter(|&i| pts[i].dist(&q) <= 120.0).collect();
            inside.sort();
            assert_eq!(grid.within(&pts, &q, 120.0), inside);
        }
    }

    #[test]
    fn voronoi_cells_tile_the_window() {
        let w = Window::centered_square(400.0).unwrap();
        let pts = sample_ppp(5e-5, &w, 11).unwrap();
        let grid = SpatialGrid::new(&pts, &w);
        let total: f64 = (0..pts.len())
            .map(|i| polygon_area(&voronoi_cell(&pts, &grid, i, &w)))
            .sum();
        assert!((total - w.area()).abs() < 1e-6 * w.area());
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for i in 0..pts.len() {
            let cell = voronoi_cell(&pts, &grid, i, &w);
            for _ in 0..20 {
                let u = uniform_in_polygon(&cell, &mut rng);
                assert_eq!(grid.nearest(&pts, &u), Some(i));
            }
        }
    }
}

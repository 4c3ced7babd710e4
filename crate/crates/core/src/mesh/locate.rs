//! Point location on simplicial meshes through a uniform bin grid.

use super::{dot, Mesh};
use crate::Point;

/// Default barycentric tolerance for [`PointLocator::locate`].
pub const DEFAULT_LOCATE_TOL: f64 = 1e-12;

/// Points within this fraction of the bounding-box diagonal of an element are
/// snapped onto it.
const SNAP_FRACTION: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LocationStatus {
    Inside,
    Snapped,
    Outside,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocationResult {
    /// Containing element, or the nearest one when outside.
    pub element: usize,
    /// Barycentric coordinates (first `dim + 1` used). For snapped and outside
    /// points these are the coordinates of the closest point of the element.
    pub barycentric: [f64; 4],
    pub status: LocationStatus,
}

impl LocationResult {
    pub fn is_outside(&self) -> bool {
        self.status == LocationStatus::Outside
    }
}

/// Spatial bin index over a mesh. Holds no reference to the mesh; the same
/// mesh must be passed to [`PointLocator::locate`].
#[derive(Debug, Clone)]
pub struct PointLocator {
    origin: Point,
    cell: f64,
    bins: [usize; 3],
    offsets: Vec<usize>,
    items: Vec<usize>,
    snap: f64,
}

impl PointLocator {
    pub fn new(mesh: &Mesh) -> Self {
        let dim = mesh.dim();
        let count = mesh.element_count();
        let snap = SNAP_FRACTION * mesh.bbox_scale();
        let (lo, hi) = mesh.bounding_box();
        let mean_diameter =
            (0..count).map(|e| mesh.geometry(e).diameter()).sum::<f64>() / count as f64;

        let mut cell = mean_diameter;
        let extent: Vec<f64> = (0..dim).map(|c| hi[c] - lo[c] + 2.0 * snap).collect();
        let max_bins = (8 * count).max(1) as f64;
        loop {
            let total: f64 = extent.iter().map(|x| (x / cell).ceil().max(1.0)).product();
            if total <= max_bins {
                break;
            }
            cell *= 1.5;
        }
        let mut bins = [1usize; 3];
        for c in 0..dim {
            bins[c] = ((extent[c] / cell).ceil() as usize).max(1);
        }
        let mut origin = lo;
        for c in 0..dim {
            origin[c] -= snap;
        }

        let mut locator = PointLocator {
            origin,
            cell,
            bins,
            offsets: Vec::new(),
            items: Vec::new(),
            snap,
        };

        // two passes: count, then fill (elements land in ascending order)
        let total_bins = bins[0] * bins[1] * bins[2];
        let mut counts = vec![0usize; total_bins + 1];
        let ranges: Vec<[(usize, usize); 3]> = (0..count)
            .map(|e| locator.element_bin_range(mesh, e))
            .collect();
        for range in &ranges {
            locator.for_each_bin(range, |b| counts[b + 1] += 1);
        }
        for b in 0..total_bins {
            counts[b + 1] += counts[b];
        }
        let mut cursor = counts.clone();
        let mut items = vec![0usize; counts[total_bins]];
        for (e, range) in ranges.iter().enumerate() {
            locator.for_each_bin(range, |b| {
                items[cursor[b]] = e;
                cursor[b] += 1;
            });
        }
        locator.offsets = counts;
        locator.items = items;
        locator
    }

    fn axis_bin(&self, c: usize, x: f64) -> usize {
        let k = ((x - self.origin[c]) / self.cell).floor();
        (k.max(0.0) as usize).min(self.bins[c] - 1)
    }

    fn element_bin_range(&self, mesh: &Mesh, e: usize) -> [(usize, usize); 3] {
        let mut range = [(0, 0); 3];
        for c in 0..mesh.dim() {
            let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
            for &n in mesh.element(e) {
                lo = lo.min(mesh.nodes()[n][c]);
                hi = hi.max(mesh.nodes()[n][c]);
            }
            range[c] = (self.axis_bin(c, lo - self.snap), self.axis_bin(c, hi + self.snap));
        }
        range
    }

    fn for_each_bin(&self, range: &[(usize, usize); 3], mut f: impl FnMut(usize)) {
        for k in range[2].0..=range[2].1 {
            for j in range[1].0..=range[1].1 {
                for i in range[0].0..=range[0].1 {
                    f((k * self.bins[1] + j) * self.bins[0] + i);
                }
            }
        }
    }

    fn bin_of(&self, mesh: &Mesh, x: &Point) -> Option<usize> {
        let mut idx = [0usize; 3];
        for c in 0..mesh.dim() {
            let rel = (x[c] - self.origin[c]) / self.cell;
            if !(rel >= 0.0 && rel <= self.bins[c] as f64) {
                return None;
            }
            idx[c] = (rel.floor() as usize).min(self.bins[c] - 1);
        }
        Some((idx[2] * self.bins[1] + idx[1]) * self.bins[0] + idx[0])
    }

    /// Distance under which a point outside every element is snapped.
    pub fn snap_distance(&self) -> f64 {
        self.snap
    }

    /// Locates `x`. Among elements containing the point (barycentrics all
    /// `>= -tol`) the lowest index wins.
    pub fn locate(&self, mesh: &Mesh, x: &Point, tol: f64) -> LocationResult {
        let dim = mesh.dim();
        if let Some(bin) = self.bin_of(mesh, x) {
            let mut best: Option<(f64, usize)> = None;
            for &e in &self.items[self.offsets[bin]..self.offsets[bin + 1]] {
                let geometry = mesh.geometry(e);
                let lambda = geometry.barycentric(x);
                let min = lambda[..=dim].iter().copied().fold(f64::INFINITY, f64::min);
                if min >= -tol {
                    return LocationResult {
                        element: e,
                        barycentric: lambda,
                        status: LocationStatus::Inside,
                    };
                }
                let d = distance_to_element(mesh, e, x);
                if best.is_none_or(|(bd, _)| d < bd) {
                    best = Some((d, e));
                }
            }
            if let Some((d, e)) = best {
                if d <= self.snap {
                    return LocationResult {
                        element: e,
                        barycentric: closest_barycentric(mesh, e, x),
                        status: LocationStatus::Snapped,
                    };
                }
            }
        }
        let mut nearest = (f64::INFINITY, 0);
        for e in 0..mesh.element_count() {
            let d = distance_to_element(mesh, e, x);
            if d < nearest.0 {
                nearest = (d, e);
            }
        }
        LocationResult {
            element: nearest.1,
            barycentric: closest_barycentric(mesh, nearest.1, x),
            status: LocationStatus::Outside,
        }
    }
}

fn closest_point_on_element(mesh: &Mesh, e: usize, x: &Point) -> Point {
    let element = mesh.element(e);
    let p = |k: usize| mesh.nodes()[element[k]];
    if mesh.dim() == 2 {
        return closest_point_on_triangle(x, &p(0), &p(1), &p(2));
    }
    let geometry = mesh.geometry(e);
    let lambda = geometry.barycentric(x);
    if lambda.iter().all(|&l| l >= 0.0) {
        return *x;
    }
    const FACES: [[usize; 3]; 4] = [[1, 2, 3], [0, 2, 3], [0, 1, 3], [0, 1, 2]];
    let mut best = (f64::INFINITY, *x);
    for face in FACES {
        let q = closest_point_on_triangle(x, &p(face[0]), &p(face[1]), &p(face[2]));
        let d = super::distance(x, &q);
        if d < best.0 {
            best = (d, q);
        }
    }
    best.1
}

fn distance_to_element(mesh: &Mesh, e: usize, x: &Point) -> f64 {
    super::distance(x, &closest_point_on_element(mesh, e, x))
}

fn closest_barycentric(mesh: &Mesh, e: usize, x: &Point) -> [f64; 4] {
    let dim = mesh.dim();
    let q = closest_point_on_element(mesh, e, x);
    let mut lambda = mesh.geometry(e).barycentric(&q);
    let mut sum = 0.0;
    for l in lambda.iter_mut().take(dim + 1) {
        *l = l.max(0.0);
        sum += *l;
    }
    for l in lambda.iter_mut().take(dim + 1) {
        *l /= sum;
    }
    // absorb the renormalisation rounding into the largest coordinate
    let tail: f64 = lambda[..=dim].iter().sum::<f64>() - 1.0;
    let (imax, _) = lambda[..=dim]
        .iter()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |acc, (i, &l)| if l > acc.1 { (i, l) } else { acc });
    lambda[imax] -= tail;
    lambda
}

/// Closest point of triangle `abc` to `p` (Voronoi-region walk).
fn closest_point_on_triangle(p: &Point, a: &Point, b: &Point, c: &Point) -> Point {
    let sub = |u: &Point, v: &Point| [u[0] - v[0], u[1] - v[1], u[2] - v[2]];
    let along = |o: &Point, d: &Point, t: f64| [o[0] + t * d[0], o[1] + t * d[1], o[2] + t * d[2]];
    let ab = sub(b, a);
    let ac = sub(c, a);
    let ap = sub(p, a);
    let d1 = dot(&ab, &ap);
    let d2 = dot(&ac, &ap);
    if d1 <= 0.0 && d2 <= 0.0 {
        return *a;
    }
    let bp = sub(p, b);
    let d3 = dot(&ab, &bp);
    let d4 = dot(&ac, &bp);
    if d3 >= 0.0 && d4 <= d3 {
        return *b;
    }
    let vc = d1 * d4 - d3 * d2;
    if vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0 {
        return along(a, &ab, d1 / (d1 - d3));
    }
    let cp = sub(p, c);
    let d5 = dot(&ab, &cp);
    let d6 = dot(&ac, &cp);
    if d6 >= 0.0 && d5 <= d6 {
        return *c;
    }
    let vb = d5 * d2 - d1 * d6;
    if vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0 {
        return along(a, &ac, d2 / (d2 - d6));
    }
    let va = d3 * d6 - d5 * d4;
    if va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0 {
        let bc = sub(c, b);
        return along(b, &bc, (d4 - d3) / ((d4 - d3) + (d5 - d6)));
    }
    let denom = 1.0 / (va + vb + vc);
    let v = vb * denom;
    let w = vc * denom;
    [
        a[0] + ab[0] * v + ac[0] * w,
        a[1] + ab[1] * v + ac[1] * w,
        a[2] + ab[2] * v + ac[2] * w,
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{distance, generate_structured_mesh, MeshKind};
    use proptest::prelude::*;

    fn unit_square(n: usize) -> Mesh {
        generate_structured_mesh(MeshKind::UnitSquareTri, n, 1.0).unwrap()
    }

    fn linear_scan(mesh: &Mesh, x: &Point, tol: f64) -> Option<usize> {
        (0..mesh.element_count()).find(|&e| {
            let l = mesh.geometry(e).barycentric(x);
            l[..=mesh.dim()].iter().all(|&v| v >= -tol)
        })
    }

    #[test]
    fn interior_point() {
        let mesh = unit_square(2);
        let locator = PointLocator::new(&mesh);
        let r = locator.locate(&mesh, &[0.25, 0.25, 0.0], DEFAULT_LOCATE_TOL);
        assert_eq!(r.status, LocationStatus::Inside);
        let sum: f64 = r.barycentric[..3].iter().sum();
        assert!((sum - 1.0).abs() < 1e-12);
    }

    #[test]
    fn shared_edge_goes_to_lowest_element() {
        let mesh = unit_square(1);
        let locator = PointLocator::new(&mesh);
        // (0.5, 0.5) lies on the diagonal shared by elements 0 and 1
        let r = locator.locate(&mesh, &[0.5, 0.5, 0.0], DEFAULT_LOCATE_TOL);
        assert_eq!((r.status, r.element), (LocationStatus::Inside, 0));
    }

    #[test]
    fn exterior_and_snapped_points() {
        let mesh = unit_square(3);
        let locator = PointLocator::new(&mesh);
        let r = locator.locate(&mesh, &[2.0, 2.0, 0.0], DEFAULT_LOCATE_TOL);
        assert_eq!(r.status, LocationStatus::Outside);
        // nearest element touches the (1,1) corner
        assert!(mesh.element(r.element).contains(&15));

        let eps = 0.1 * locator.snap_distance();
        let r = locator.locate(&mesh, &[1.0 + eps, 0.5, 0.0], DEFAULT_LOCATE_TOL);
        assert_eq!(r.status, LocationStatus::Snapped);
        let sum: f64 = r.barycentric[..3].iter().sum();
        assert!((sum - 1.0).abs() < 1e-12);
        assert!(r.barycentric[..3].iter().all(|&l| l >= 0.0));

        let r = locator.locate(&mesh, &[1.0 + 1e-4, 0.5, 0.0], DEFAULT_LOCATE_TOL);
        assert_eq!(r.status, LocationStatus::Outside);
    }

    #[test]
    fn centroids_locate_their_element() {
        for mesh in [unit_square(5), generate_structured_mesh(MeshKind::UnitCubeTet, 3, 1.0).unwrap()] {
            let locator = PointLocator::new(&mesh);
            for e in 0..mesh.element_count() {
                let c = mesh.geometry(e).centroid();
                let r = locator.locate(&mesh, &c, DEFAULT_LOCATE_TOL);
                assert_eq!((r.status, r.element), (LocationStatus::Inside, e));
            }
        }
    }

    #[test]
    fn closest_point_regions() {
        let (a, b, c) = ([0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]);
        let cases = [
            ([-1.0, -1.0, 0.0], a),
            ([0.5, -1.0, 0.0], [0.5, 0.0, 0.0]),
            ([1.0, 1.0, 0.0], [0.5, 0.5, 0.0]),
            ([0.2, 0.2, 3.0], [0.2, 0.2, 0.0]),
        ];
        for (p, expected) in cases {
            let q = closest_point_on_triangle(&p, &a, &b, &c);
            assert!(distance(&q, &expected) < 1e-15, "{q:?} vs {expected:?}");
        }
    }

    proptest! {
        #[test]
        fn agrees_with_linear_scan(x in 0.0f64..1.0, y in 0.0f64..1.0, z in 0.0f64..1.0) {
            let square = unit_square(4);
            let cube = generate_structured_mesh(MeshKind::UnitCubeTet, 2, 1.0).unwrap();
            for (mesh, p) in [(square, [x, y, 0.0]), (cube, [x, y, z])] {
                let locator = PointLocator::new(&mesh);
                let r = locator.locate(&mesh, &p, DEFAULT_LOCATE_TOL);
                prop_assert_eq!(r.status, LocationStatus::Inside);
                prop_assert_eq!(Some(r.element), linear_scan(&mesh, &p, DEFAULT_LOCATE_TOL));
                let sum: f64 = r.barycentric[..=mesh.dim()].iter().sum();
                prop_assert!((sum - 1.0).abs() < 1e-12);
            }
        }
    }
}

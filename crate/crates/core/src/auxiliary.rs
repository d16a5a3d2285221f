//! The one-new-centroid subproblem.
//!
//! With the current centroids frozen, placing one extra centroid at `y`
//! changes the objective to `g(y)`, the weighted mean of
//! `min(nearest_sq[i], |y - a_i|^2)`. Everything the candidate-selection
//! stage needs — the improvement region, the captured/retained split at a
//! trial point, and the objective decrease — derives from the cached
//! per-point squared distances `nearest_sq`.

use crate::clustering::{dist_sq, CentroidSystem};
use crate::dataset::DataSet;

/// Immutable per-level cache shared by all candidate evaluations.
///
/// Rebuilt once per incremental level and never patched in place, so every
/// query sees one consistent snapshot.
#[derive(Debug)]
pub struct AuxContext<'a> {
    data: &'a DataSet,
    xbar: &'a CentroidSystem,
    nearest_sq: Vec<f64>,
    current_objective: f64,
}

impl<'a> AuxContext<'a> {
    /// Caches each point's squared distance to its nearest current centroid
    /// and the current objective value.
    pub fn new(data: &'a DataSet, xbar: &'a CentroidSystem) -> Self {
        assert_eq!(data.dim(), xbar.dim(), "dimension mismatch");
        let nearest_sq: Vec<f64> = (0..data.len())
            .map(|i| {
                let p = data.point(i);
                (0..xbar.len())
                    .map(|j| dist_sq(p, xbar.centroid(j)))
                    .fold(f64::INFINITY, f64::min)
            })
            .collect();
        let mut sum = 0.0;
        for (i, d) in nearest_sq.iter().enumerate() {
            sum += data.weight(i) as f64 * d;
        }
        let current_objective = sum / data.total_weight();
        Self {
            data,
            xbar,
            nearest_sq,
            current_objective,
        }
    }

    pub fn data(&self) -> &DataSet {
        self.data
    }

    pub fn xbar(&self) -> &CentroidSystem {
        self.xbar
    }

    /// Squared distance from each point to its nearest current centroid.
    pub fn nearest_sq(&self) -> &[f64] {
        &self.nearest_sq
    }

    /// Objective value of the current centroid system.
    pub fn current_objective(&self) -> f64 {
        self.current_objective
    }

    /// Objective after adding a centroid at `y` to the current system.
    pub fn aux_objective(&self, y: &[f64]) -> f64 {
        let mut sum = 0.0;
        for i in 0..self.data.len() {
            let d = dist_sq(y, self.data.point(i)).min(self.nearest_sq[i]);
            sum += self.data.weight(i) as f64 * d;
        }
        sum / self.data.total_weight()
    }

    /// The difference-of-convex split of the auxiliary objective: a smooth
    /// part (current objective plus mean squared distance to `y`) minus a
    /// nonsmooth part (mean of the pairwise maxima). Their difference
    /// equals [`Self::aux_objective`].
    pub fn dc_parts(&self, y: &[f64]) -> (f64, f64) {
        let w_total = self.data.total_weight();
        let mut sum_dist = 0.0;
        let mut sum_max = 0.0;
        for i in 0..self.data.len() {
            let w = self.data.weight(i) as f64;
            let d = dist_sq(y, self.data.point(i));
            sum_dist += w * d;
            sum_max += w * d.max(self.nearest_sq[i]);
        }
        (
            self.current_objective + sum_dist / w_total,
            sum_max / w_total,
        )
    }

    /// True when placing a centroid at `y` strictly lowers the objective,
    /// i.e. `y` lies in the union of open balls around the data points with
    /// squared radii `nearest_sq`. Data points that coincide with a current
    /// centroid are outside this region.
    pub fn improves(&self, y: &[f64]) -> bool {
        (0..self.data.len()).any(|i| dist_sq(y, self.data.point(i)) < self.nearest_sq[i])
    }

    /// Splits the data indices at `y`: points strictly closer to `y` than
    /// to their current centroid (captured) and the rest (retained).
    pub fn partition_at(&self, y: &[f64]) -> (Vec<usize>, Vec<usize>) {
        let mut captured = Vec::new();
        let mut retained = Vec::new();
        for i in 0..self.data.len() {
            if dist_sq(y, self.data.point(i)) < self.nearest_sq[i] {
                captured.push(i);
            } else {
                retained.push(i);
            }
        }
        (captured, retained)
    }

    /// The objective decrease achieved by adding a centroid at `y`:
    /// the weighted mean of `max(0, nearest_sq[i] - |y - a_i|^2)`.
    /// Nonnegative, and strictly positive exactly on the improvement
    /// region.
    pub fn decrease(&self, y: &[f64]) -> f64 {
        let mut sum = 0.0;
        for i in 0..self.data.len() {
            let gain = self.nearest_sq[i] - dist_sq(y, self.data.point(i));
            if gain > 0.0 {
                sum += self.data.weight(i) as f64 * gain;
            }
        }
        sum / self.data.total_weight()
    }

    /// Indices of data points inside the improvement region. Under pairwise
    /// distinct data these are exactly the points not equal to any current
    /// centroid.
    pub fn data_in_improvement_region(&self) -> Vec<usize> {
        (0..self.data.len())
            .filter(|&i| self.nearest_sq[i] > 0.0)
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::DataSet;

    fn triangle() -> DataSet {
        DataSet::new(vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap()
    }

    fn square() -> DataSet {
        DataSet::new(vec![
            vec![0.0, 0.0],
            vec![1.0, 0.0],
            vec![0.0, 1.0],
            vec![1.0, 1.0],
        ])
        .unwrap()
    }

    fn system(centroids: &[&[f64]]) -> CentroidSystem {
        CentroidSystem::new(centroids.iter().map(|c| c.to_vec()).collect()).unwrap()
    }

    #[test]
    fn caches_nearest_distances_triangle() {
        let d = triangle();
        let x = system(&[&[1.0 / 3.0, 1.0 / 3.0]]);
        let ctx = AuxContext::new(&d, &x);
        let expect = [2.0 / 9.0, 5.0 / 9.0, 5.0 / 9.0];
        for (got, want) in ctx.nearest_sq().iter().zip(expect) {
            assert!((got - want).abs() < 1e-15);
        }
        assert!((ctx.current_objective() - 4.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn caches_nearest_distances_square() {
        let d = square();
        let x = system(&[&[0.5, 0.5]]);
        let ctx = AuxContext::new(&d, &x);
        for &v in ctx.nearest_sq() {
            assert_eq!(v, 0.5);
        }
    }

    #[test]
    fn nearest_distances_vanish_when_centroids_cover_data() {
        let d = triangle();
        let x = CentroidSystem::new(d.points().to_vec()).unwrap();
        let ctx = AuxContext::new(&d, &x);
        assert!(ctx.nearest_sq().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn aux_objective_triangle_values() {
        let d = triangle();
        let x = system(&[&[1.0 / 3.0, 1.0 / 3.0]]);
        let ctx = AuxContext::new(&d, &x);
        assert!((ctx.aux_objective(&[0.0, 0.0]) - 10.0 / 27.0).abs() < 1e-15);
        assert!((ctx.aux_objective(&[1.0, 0.0]) - 7.0 / 27.0).abs() < 1e-15);
    }

    #[test]
    fn aux_objective_square_corner() {
        let d = square();
        let x = system(&[&[0.5, 0.5]]);
        let ctx = AuxContext::new(&d, &x);
        assert!((ctx.aux_objective(&[0.0, 0.0]) - 3.0 / 8.0).abs() < 1e-15);
    }

    #[test]
    fn aux_objective_at_existing_centroid_changes_nothing() {
        let d = triangle();
        let x = system(&[&[1.0 / 3.0, 1.0 / 3.0]]);
        let ctx = AuxContext::new(&d, &x);
        let y = x.centroid(0);
        assert_eq!(ctx.aux_objective(y), ctx.current_objective());
    }

    #[test]
    fn dc_split_reproduces_objective() {
        let d = triangle();
        let x = system(&[&[1.0 / 3.0, 1.0 / 3.0]]);
        let ctx = AuxContext::new(&d, &x);
        for y in [[0.2, 0.7], [1.0, 0.0], [-3.0, 5.0]] {
            let (smooth, nonsmooth) = ctx.dc_parts(&y);
            let g = ctx.aux_objective(&y);
            assert!((smooth - nonsmooth - g).abs() <= 1e-12);
        }
    }

    #[test]
    fn dc_parts_match_direct_sums() {
        // Independent accumulation of both parts at y = (1, 0).
        let d = triangle();
        let x = system(&[&[1.0 / 3.0, 1.0 / 3.0]]);
        let ctx = AuxContext::new(&d, &x);
        let y = [1.0, 0.0];
        let mut smooth = 0.0;
        let mut nonsmooth = 0.0;
        for i in 0..d.len() {
            let p = d.point(i);
            let dist = (p[0] - y[0]).powi(2) + (p[1] - y[1]).powi(2);
            let near = ctx.nearest_sq()[i];
            smooth += near + dist;
            nonsmooth += dist.max(near);
        }
        smooth /= 3.0;
        nonsmooth /= 3.0;
        let (s, n) = ctx.dc_parts(&y);
        assert!((s - smooth).abs() <= 1e-12);
        assert!((n - nonsmooth).abs() <= 1e-12);
        assert!((s - 13.0 / 9.0).abs() < 1e-15);
        assert!((n - 32.0 / 27.0).abs() < 1e-15);
    }

    #[test]
    fn dc_parts_collapse_when_data_covered() {
        let d = triangle();
        let x = CentroidSystem::new(d.points().to_vec()).unwrap();
        let ctx = AuxContext::new(&d, &x);
        let y = [0.4, 0.4];
        let (smooth, nonsmooth) = ctx.dc_parts(&y);
        assert_eq!(smooth, nonsmooth);
        assert_eq!(ctx.aux_objective(&y), 0.0);
    }

    #[test]
    fn improvement_region_membership() {
        let d = triangle();
        let x = system(&[&[1.0 / 3.0, 1.0 / 3.0]]);
        let ctx = AuxContext::new(&d, &x);
        assert!(ctx.improves(&[0.0, 0.0]));
        assert!(!ctx.improves(x.centroid(0)));
        assert!(!ctx.improves(&[1e6, 1e6]));
    }

    #[test]
    fn partition_at_data_point_captures_itself() {
        let d = triangle();
        let x = system(&[&[1.0 / 3.0, 1.0 / 3.0]]);
        let ctx = AuxContext::new(&d, &x);
        let (captured, retained) = ctx.partition_at(&[0.0, 0.0]);
        assert_eq!(captured, vec![0]);
        assert_eq!(retained, vec![1, 2]);
    }

    #[test]
    fn partition_at_current_centroid_captures_nothing() {
        let d = triangle();
        let x = system(&[&[1.0 / 3.0, 1.0 / 3.0]]);
        let ctx = AuxContext::new(&d, &x);
        let (captured, retained) = ctx.partition_at(x.centroid(0));
        assert!(captured.is_empty());
        assert_eq!(retained.len(), 3);
    }

    #[test]
    fn partition_matches_direct_predicate() {
        // Five fixed points; y is the barycenter of the two far-apart
        // ones. Check the split against an independent evaluation of the
        // defining predicate.
        let d = DataSet::new(vec![
            vec![0.0, 0.0],
            vec![0.4, 0.2],
            vec![6.0, 6.0],
            vec![6.3, 5.8],
            vec![3.0, 1.0],
        ])
        .unwrap();
        let x = system(&[&[2.0, 2.0]]);
        let ctx = AuxContext::new(&d, &x);
        let y = d.barycenter_of(&[0, 2]).unwrap();
        let (captured, retained) = ctx.partition_at(&y);
        for i in 0..d.len() {
            let p = d.point(i);
            let to_y = (p[0] - y[0]).powi(2) + (p[1] - y[1]).powi(2);
            let to_center = (p[0] - 2.0).powi(2) + (p[1] - 2.0).powi(2);
            if to_y < to_center {
                assert!(captured.contains(&i));
            } else {
                assert!(retained.contains(&i));
            }
        }
        assert_eq!(captured.len() + retained.len(), d.len());
    }

    #[test]
    fn partition_route_reproduces_objective() {
        // Summing captured distances to y and retained distances to the
        // current centroids gives the auxiliary objective.
        let d = square();
        let x = system(&[&[0.3, 0.4], &[0.9, 0.9]]);
        let ctx = AuxContext::new(&d, &x);
        for y in [[0.0, 0.0], [0.5, 0.5], [1.0, 0.2], [-2.0, 3.0]] {
            let (captured, retained) = ctx.partition_at(&y);
            let mut sum = 0.0;
            for &i in &captured {
                let p = d.point(i);
                sum += (p[0] - y[0]).powi(2) + (p[1] - y[1]).powi(2);
            }
            for &i in &retained {
                sum += ctx.nearest_sq()[i];
            }
            let via_partition = sum / d.total_weight();
            assert!((via_partition - ctx.aux_objective(&y)).abs() <= 1e-12);
        }
    }

    #[test]
    fn decrease_triangle_values() {
        let d = triangle();
        let x = system(&[&[1.0 / 3.0, 1.0 / 3.0]]);
        let ctx = AuxContext::new(&d, &x);
        assert!((ctx.decrease(&[0.0, 0.0]) - 2.0 / 27.0).abs() < 1e-15);
        assert!((ctx.decrease(&[1.0, 0.0]) - 5.0 / 27.0).abs() < 1e-15);
        assert_eq!(ctx.decrease(x.centroid(0)), 0.0);
    }

    #[test]
    fn decrease_square_values() {
        let d = square();
        let x = system(&[&[0.5, 0.5]]);
        let ctx = AuxContext::new(&d, &x);
        for i in 0..d.len() {
            assert!((ctx.decrease(d.point(i)) - 1.0 / 8.0).abs() < 1e-15);
        }
    }

    #[test]
    fn decrease_equals_objective_drop() {
        let d = square();
        let x = system(&[&[0.3, 0.4]]);
        let ctx = AuxContext::new(&d, &x);
        for y in [[0.0, 0.0], [0.9, 0.9], [2.0, -1.0]] {
            let drop = ctx.current_objective() - ctx.aux_objective(&y);
            assert!((ctx.decrease(&y) - drop).abs() <= 1e-12);
        }
    }
}

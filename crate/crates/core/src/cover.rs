//! Balls, covers, Vitali-type disjoint selection and Hausdorff-content upper bounds.
//!
//! Membership is closed throughout: `z` lies in `B(c, r)` iff `dist(c, z) <= r`.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::ball::invariant_distance;
use crate::error::{domain, Error, Result};
use crate::point::CPoint;

/// Radius floor used when a cover would otherwise need zero-radius balls.
pub const MIN_RADIUS: f64 = 1e-12;

/// Slack used by geometric predicates (disjointness, containment).
pub const GEOM_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    /// `|z - w|` on C^n.
    Euclidean,
    /// `d_B(z, w) = |Phi_z(w)|` on the unit ball; balls are pseudo-balls.
    Invariant,
}

impl Metric {
    pub fn distance(self, a: &CPoint, b: &CPoint) -> Result<f64> {
        a.check_dim(b.dim())?;
        match self {
            Metric::Euclidean => Ok(a.dist(b)),
            Metric::Invariant => invariant_distance(a, b),
        }
    }

    /// Vitali expansion factor: 5 for Euclidean balls, 3 for pseudo-balls.
    pub fn expansion(self) -> f64 {
        match self {
            Metric::Euclidean => 5.0,
            Metric::Invariant => 3.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricBall {
    pub center: CPoint,
    pub radius: f64,
    pub metric: Metric,
}

impl MetricBall {
    pub fn new(center: CPoint, radius: f64, metric: Metric) -> Result<Self> {
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(domain!("ball radius must be positive and finite, got {radius}"));
        }
        if metric == Metric::Invariant && (center.norm() >= 1.0 || radius >= 1.0) {
            return Err(domain!(
                "pseudo-balls need |center| < 1 and radius < 1 (got |center| = {}, radius = {radius})",
                center.norm()
            ));
        }
        Ok(MetricBall { center, radius, metric })
    }

    pub fn euclidean(center: CPoint, radius: f64) -> Result<Self> {
        Self::new(center, radius, Metric::Euclidean)
    }

    pub fn contains(&self, z: &CPoint) -> Result<bool> {
        ball_contains(self, z)
    }
}

/// Closed-ball membership in the ball's own metric.
pub fn ball_contains(b: &MetricBall, z: &CPoint) -> Result<bool> {
    Ok(b.metric.distance(&b.center, z)? <= b.radius)
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct BallCover {
    pub balls: Vec<MetricBall>,
    pub delta_cap: Option<f64>,
}

impl BallCover {
    pub fn new(balls: Vec<MetricBall>, delta_cap: Option<f64>) -> Result<Self> {
        if let Some(first) = balls.first() {
            if balls.iter().any(|b| b.metric != first.metric) {
                return Err(Error::MixedMetrics);
            }
        }
        if let Some(cap) = delta_cap {
            if !(cap > 0.0) {
                return Err(domain!("delta cap must be positive, got {cap}"));
            }
            if let Some(b) = balls.iter().find(|b| b.radius > cap * (1.0 + GEOM_TOL)) {
                return Err(domain!("ball radius {} exceeds delta cap {cap}", b.radius));
            }
        }
        Ok(BallCover { balls, delta_cap })
    }

    pub fn len(&self) -> usize {
        self.balls.len()
    }

    pub fn is_empty(&self) -> bool {
        self.balls.is_empty()
    }

    pub fn metric(&self) -> Option<Metric> {
        self.balls.first().map(|b| b.metric)
    }

    pub fn radii(&self) -> impl Iterator<Item = f64> + '_ {
        self.balls.iter().map(|b| b.radius)
    }

    /// True if some ball contains `z` (closed convention, with [`GEOM_TOL`] slack).
    pub fn covers(&self, z: &CPoint) -> Result<bool> {
        for b in &self.balls {
            if b.metric.distance(&b.center, z)? <= b.radius + GEOM_TOL {
                return Ok(true);
            }
        }
        Ok(false)
    }

    pub fn content(&self, p: f64) -> f64 {
        content_sum(self, p)
    }
}

/// `sum_j r_j^p` over the balls of a cover.
pub fn content_sum(cover: &BallCover, p: f64) -> f64 {
    cover.radii().map(|r| r.powf(p)).fold(0.0, |acc, x| acc + x)
}

/// Greedy Vitali selection.
///
/// Balls are visited by decreasing radius (ties by input index); a ball is kept when it is
/// disjoint from everything kept so far, i.e. `dist(c_i, c_j) > (r_i + r_j)(1 + GEOM_TOL)`, so
/// that closed balls touching at a point are never both kept. Every rejected
/// ball therefore meets a kept ball of radius at least its own. Returns the kept family and
/// the same family with radii multiplied by `expansion`.
pub fn vitali_select(balls: &[MetricBall], expansion: f64) -> Result<(BallCover, BallCover)> {
    if !(expansion >= 1.0) {
        return Err(domain!("expansion must be >= 1, got {expansion}"));
    }
    let metric = match balls.first() {
        Some(b) => b.metric,
        None => return Ok((BallCover::default(), BallCover::default())),
    };
    if balls.iter().any(|b| b.metric != metric) {
        return Err(Error::MixedMetrics);
    }
    let mut order: Vec<usize> = (0..balls.len()).collect();
    order.sort_by(|&i, &j| balls[j].radius.total_cmp(&balls[i].radius).then(i.cmp(&j)));

    let mut kept: Vec<MetricBall> = Vec::new();
    for i in order {
        let b = &balls[i];
        let mut disjoint = true;
        for k in &kept {
            if metric.distance(&k.center, &b.center)? <= (k.radius + b.radius) * (1.0 + GEOM_TOL) {
                disjoint = false;
                break;
            }
        }
        if disjoint {
            kept.push(b.clone());
        }
    }
    let expanded = kept
        .iter()
        .map(|b| MetricBall::new(b.center.clone(), b.radius * expansion, metric))
        .collect::<Result<Vec<_>>>()?;
    Ok((BallCover::new(kept, None)?, BallCover::new(expanded, None)?))
}

/// Upper estimate of `h^p_delta` of a finite point set by an explicit Euclidean cover.
///
/// Candidates are the minimal enclosing ball (exact in C^1, bounding-box ball otherwise)
/// and, for every dyadic level, the cover by balls circumscribing the occupied dyadic
/// cubes of R^{2n}. Every candidate's content is monotone in the point set, so the
/// returned minimum is monotone too. Radii are floored at [`MIN_RADIUS`] (or the cap
/// when it is smaller); the first candidate wins ties.
pub fn hausdorff_content_upper(
    points: &[CPoint],
    p: f64,
    delta_cap: Option<f64>,
    metric: Metric,
) -> Result<(f64, BallCover)> {
    content_upper_inflated(points, p, delta_cap, metric, 0.0)
}

/// Upper estimate of `h^p_delta` of a set `K` known through a sample with fill distance
/// `fill` (every point of `K` lies within `fill` of a sample point). Each candidate cover of
/// the sample has its radii enlarged by `fill`, so it covers `K`.
pub fn set_content_upper(points: &[CPoint], p: f64, delta_cap: Option<f64>, fill: f64) -> Result<(f64, BallCover)> {
    if !(fill >= 0.0 && fill.is_finite()) {
        return Err(domain!("fill distance must be nonnegative, got {fill}"));
    }
    content_upper_inflated(points, p, delta_cap, Metric::Euclidean, fill)
}

fn content_upper_inflated(
    points: &[CPoint],
    p: f64,
    delta_cap: Option<f64>,
    metric: Metric,
    fill: f64,
) -> Result<(f64, BallCover)> {
    if !(p > 0.0) {
        return Err(domain!("content exponent must be positive, got {p}"));
    }
    if points.is_empty() {
        return Err(Error::Empty("point set for content estimation"));
    }
    if let Some(cap) = delta_cap {
        if !(cap > 0.0) {
            return Err(domain!("delta cap must be positive, got {cap}"));
        }
    }
    if metric != Metric::Euclidean {
        return Err(domain!("content estimation is implemented for the Euclidean metric only"));
    }
    let n = points[0].dim();
    for q in points {
        q.check_dim(n)?;
    }
    let r_floor = delta_cap.map_or(MIN_RADIUS, |c| c.min(MIN_RADIUS));
    let cap = delta_cap.unwrap_or(f64::INFINITY);

    let mut best: Option<(f64, Vec<(CPoint, f64)>)> = None;
    fn offer(best: &mut Option<(f64, Vec<(CPoint, f64)>)>, content: f64, balls: Vec<(CPoint, f64)>) {
        if best.as_ref().map_or(true, |(c, _)| content < *c) {
            *best = Some((content, balls));
        }
    }

    let (center, radius) = enclosing_ball(points);
    let radius = radius.max(r_floor) + fill;
    if radius <= cap {
        offer(&mut best, radius.powf(p), vec![(center, radius)]);
    }
    // a level whose single cell is already no smaller than the enclosing ball cannot win
    let useful = |cell_radius: f64| radius > cap || cell_radius < radius;

    // dyadic cubes of side 2^-k; circumscribed radius side * sqrt(2n) / 2
    let half_diag = (2.0 * n as f64).sqrt() / 2.0;
    let k_lo = if cap.is_finite() {
        (half_diag / cap).log2().ceil() as i32
    } else {
        -30
    };
    let k_hi = (half_diag / r_floor.max(fill)).log2().ceil() as i32 + 1;
    let real: Vec<Vec<f64>> = points.iter().map(|q| q.to_real()).collect();
    for k in k_lo..=k_hi {
        let side = (-(k as f64)).exp2();
        let cell_radius = (side * half_diag).max(r_floor) + fill;
        if cell_radius > cap * (1.0 + GEOM_TOL) || !useful(cell_radius) {
            continue;
        }
        let mut cells: Vec<Vec<i64>> = Vec::new();
        let mut seen: HashSet<Vec<i64>> = HashSet::new();
        for x in &real {
            let idx: Vec<i64> = x.iter().map(|v| (v / side).floor() as i64).collect();
            if seen.insert(idx.clone()) {
                cells.push(idx);
            }
        }
        let content = cells.len() as f64 * cell_radius.powf(p);
        if best.as_ref().map_or(true, |(c, _)| content < *c) {
            let balls = cells
                .iter()
                .map(|idx| {
                    let xs: Vec<f64> = idx.iter().map(|&i| (i as f64 + 0.5) * side).collect();
                    (CPoint::from_real(&xs).expect("finite cell centre"), cell_radius)
                })
                .collect();
            offer(&mut best, content, balls);
        }
    }

    let (estimate, balls) = best.ok_or_else(|| domain!("no admissible cover under delta cap"))?;
    let balls = balls
        .into_iter()
        .map(|(c, r)| MetricBall::euclidean(c, r))
        .collect::<Result<Vec<_>>>()?;
    Ok((estimate, BallCover::new(balls, delta_cap)?))
}

/// Minimal enclosing ball in C^1 (Welzl, deterministic shuffle); bounding-box ball in C^n.
fn enclosing_ball(points: &[CPoint]) -> (CPoint, f64) {
    if points[0].dim() == 1 {
        let mut pts: Vec<(f64, f64)> = points.iter().map(|q| (q.z().re, q.z().im)).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        pts.shuffle(&mut rng);
        let (cx, cy, r) = welzl_circle(&pts);
        // final radius measured against the original points so the ball surely covers
        let c = CPoint::c1_parts(cx, cy);
        let r = points.iter().map(|q| q.dist(&c)).fold(r, f64::max);
        return (c, r);
    }
    let real: Vec<Vec<f64>> = points.iter().map(|q| q.to_real()).collect();
    let d = real[0].len();
    let mut lo = vec![f64::INFINITY; d];
    let mut hi = vec![f64::NEG_INFINITY; d];
    for x in &real {
        for i in 0..d {
            lo[i] = lo[i].min(x[i]);
            hi[i] = hi[i].max(x[i]);
        }
    }
    let mid: Vec<f64> = lo.iter().zip(&hi).map(|(a, b)| 0.5 * (a + b)).collect();
    let r = lo
        .iter()
        .zip(&hi)
        .map(|(a, b)| 0.25 * (b - a) * (b - a))
        .sum::<f64>()
        .sqrt();
    (CPoint::from_real(&mid).expect("finite"), r)
}

fn welzl_circle(pts: &[(f64, f64)]) -> (f64, f64, f64) {
    let inside = |c: (f64, f64, f64), q: (f64, f64)| {
        ((q.0 - c.0).powi(2) + (q.1 - c.1).powi(2)).sqrt() <= c.2 * (1.0 + 1e-12) + 1e-15
    };
    let mut c = (pts[0].0, pts[0].1, 0.0);
    for i in 1..pts.len() {
        if inside(c, pts[i]) {
            continue;
        }
        c = (pts[i].0, pts[i].1, 0.0);
        for j in 0..i {
            if inside(c, pts[j]) {
                continue;
            }
            c = circle_two(pts[i], pts[j]);
            for k in 0..j {
                if !inside(c, pts[k]) {
                    c = circle_three(pts[i], pts[j], pts[k]);
                }
            }
        }
    }
    c
}

fn circle_two(a: (f64, f64), b: (f64, f64)) -> (f64, f64, f64) {
    let cx = 0.5 * (a.0 + b.0);
    let cy = 0.5 * (a.1 + b.1);
    (cx, cy, 0.5 * ((a.0 - b.0).powi(2) + (a.1 - b.1).powi(2)).sqrt())
}

fn circle_three(a: (f64, f64), b: (f64, f64), c: (f64, f64)) -> (f64, f64, f64) {
    let d = 2.0 * (a.0 * (b.1 - c.1) + b.0 * (c.1 - a.1) + c.0 * (a.1 - b.1));
    if d.abs() < 1e-300 {
        // collinear: the farthest pair spans the circle
        let cands = [circle_two(a, b), circle_two(a, c), circle_two(b, c)];
        return cands.into_iter().fold((0.0, 0.0, -1.0), |m, x| if x.2 > m.2 { x } else { m });
    }
    let a2 = a.0 * a.0 + a.1 * a.1;
    let b2 = b.0 * b.0 + b.1 * b.1;
    let c2 = c.0 * c.0 + c.1 * c.1;
    let ux = (a2 * (b.1 - c.1) + b2 * (c.1 - a.1) + c2 * (a.1 - b.1)) / d;
    let uy = (a2 * (c.0 - b.0) + b2 * (a.0 - c.0) + c2 * (b.0 - a.0)) / d;
    (ux, uy, ((a.0 - ux).powi(2) + (a.1 - uy).powi(2)).sqrt())
}

//! Zero and pole location by the argument principle.
//!
//! The winding number of `f` around a closed contour is obtained by tracking
//! `arg f` along the contour with adaptive steps, rather than by integrating
//! `f'/f`: increments are small by construction, so rounding to an integer
//! is safe whenever tracking succeeds.

use std::cell::{Cell, RefCell};
use std::collections::HashMap;
use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde_json::{json, Value};

use crate::expr::{BinOp, Expr, Func, LogOutcome, LogValue};
use crate::{Error, Result};

/// A step is accepted when the argument moves by at most this much.
const MAX_STEP_ARG: f64 = PI / 4.0;
const INITIAL_SEGMENTS: usize = 8;
const EVAL_BUDGET: usize = 4_000_000;
const MAX_DEPTH: usize = 48;
/// Split fractions tried in turn; none of them is 1/2 so that lattices of
/// zeros on the coordinate axes never sit on a split line.
const SPLITS: [f64; 4] = [0.4871, 0.5137, 0.4619, 0.5383];
const NEWTON_ITERATIONS: usize = 80;
/// Zeros closer than this (relative) are reported as one multiple zero.
const RESOLUTION: f64 = 1e-4;
/// Boundary clearance below which the disk radius is nudged.
const BOUNDARY_CLEARANCE: f64 = 1e-6;

/// Zeros (and, as a by-product, poles) of an expression in `|z| < radius`.
#[derive(Debug, Clone, PartialEq)]
pub struct ZeroList {
    /// Effective radius after any nudging away from boundary zeros.
    pub radius: f64,
    pub zeros: Vec<(Complex64, usize)>,
    pub poles: Vec<(Complex64, usize)>,
    /// Winding number of `f` on the circle `|z| = radius`.
    pub outer_winding: i64,
    /// Winding number of the bounding box that started the subdivision.
    pub root_box_winding: i64,
    /// Sum of the windings of all leaf boxes.
    pub leaf_winding_sum: i64,
}

impl ZeroList {
    /// Zeros counted with multiplicity.
    pub fn total(&self) -> usize {
        self.zeros.iter().map(|z| z.1).sum()
    }

    pub fn total_poles(&self) -> usize {
        self.poles.iter().map(|p| p.1).sum()
    }

    /// `n(t)`: zeros with `|z| < t`, counted with multiplicity.
    pub fn count_within(&self, t: f64) -> usize {
        self.zeros.iter().filter(|z| z.0.norm() < t).map(|z| z.1).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.zeros.is_empty()
    }

    pub fn to_json(&self) -> Value {
        let pts = |v: &[(Complex64, usize)]| {
            v.iter()
                .map(|(z, m)| json!({"location": crate::format::format_complex(*z), "multiplicity": m}))
                .collect::<Vec<_>>()
        };
        json!({
            "radius": self.radius,
            "zeros": pts(&self.zeros),
            "poles": pts(&self.poles),
            "outer_winding": self.outer_winding,
            "root_box_winding": self.root_box_winding,
            "leaf_winding_sum": self.leaf_winding_sum,
        })
    }

    /// Zeros minus poles inside the disk; equals `outer_winding`.
    pub fn net_count(&self) -> i64 {
        self.total() as i64 - self.total_poles() as i64
    }
}

/// Locates the zeros of `f` in `|z| < r`.
pub fn count_zeros(f: &Expr, r: f64) -> Result<ZeroList> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::invalid(format!("radius must be positive, got {r}")));
    }
    if f.is_const_zero() {
        return Err(Error::Degenerate("function vanishes identically".into()));
    }
    if !f.contains_var() || f.is_zero_free() {
        if !f.contains_var() {
            if let Some(c) = f.as_const() {
                if c == Complex64::new(0.0, 0.0) {
                    return Err(Error::Degenerate("function vanishes identically".into()));
                }
            }
        }
        return Ok(ZeroList {
            radius: r,
            zeros: Vec::new(),
            poles: Vec::new(),
            outer_winding: 0,
            root_box_winding: 0,
            leaf_winding_sum: 0,
        });
    }

    let run = if f.is_entire() {
        locate(f, r, true)?
    } else if let Some((num, den)) = fraction_parts(f) {
        let zn = locate_or_empty(&num, r)?;
        let zd = locate_or_empty(&den, r)?;
        let (zeros, poles) = cancel_common(zn.zeros, zd.zeros);
        Located {
            zeros,
            poles,
            root: zn.root - zd.root,
            leaves: zn.leaves - zd.leaves,
            half_width: zn.half_width,
        }
    } else {
        locate(f, r, false)?
    };

    let mut radius = r;
    for _ in 0..8 {
        let near = run
            .zeros
            .iter()
            .chain(&run.poles)
            .any(|p| (p.0.norm() - radius).abs() < BOUNDARY_CLEARANCE * radius.max(1.0));
        if !near {
            break;
        }
        radius += 10.0 * BOUNDARY_CLEARANCE * radius.max(1.0);
    }
    debug_assert!(radius < run.half_width);

    let inside = |v: &Vec<(Complex64, usize)>| -> Vec<(Complex64, usize)> {
        let mut out: Vec<_> = v.iter().copied().filter(|p| p.0.norm() < radius).collect();
        sort_points(&mut out);
        out
    };
    let zeros = inside(&run.zeros);
    let poles = inside(&run.poles);
    let outer_winding = circle_winding(f, radius)?;
    Ok(ZeroList {
        radius,
        zeros,
        poles,
        outer_winding,
        root_box_winding: run.root,
        leaf_winding_sum: run.leaves,
    })
}

/// Winding number of `f` around `|z| = radius`, nudging the radius outward
/// slightly if the circle passes through a zero or pole.
fn circle_winding(f: &Expr, radius: f64) -> Result<i64> {
    let tracker = Tracker::new(f);
    let mut last = None;
    for attempt in 0..4 {
        let rho = radius * (1.0 + 1e-9 * attempt as f64);
        match tracker.circle(Complex64::new(0.0, 0.0), rho) {
            Ok(w) => return Ok(w),
            Err(e) => last = Some(e),
        }
    }
    Err(last.expect("at least one attempt"))
}

fn sort_points(v: &mut [(Complex64, usize)]) {
    v.sort_by(|a, b| {
        let ka = (crate::format::round12(a.0.norm()), a.0.arg());
        let kb = (crate::format::round12(b.0.norm()), b.0.arg());
        ka.partial_cmp(&kb).unwrap_or(std::cmp::Ordering::Equal)
    });
}

struct Located {
    zeros: Vec<(Complex64, usize)>,
    poles: Vec<(Complex64, usize)>,
    root: i64,
    leaves: i64,
    half_width: f64,
}

fn locate_or_empty(f: &Expr, r: f64) -> Result<Located> {
    if !f.contains_var() || f.is_zero_free() {
        return Ok(Located {
            zeros: Vec::new(),
            poles: Vec::new(),
            root: 0,
            leaves: 0,
            half_width: bounding_half_width(r, 0),
        });
    }
    locate(f, r, true)
}

fn bounding_half_width(r: f64, attempt: usize) -> f64 {
    r * (1.0013 + 0.0007 * attempt as f64) + 1e-3
}

/// Subdivides the bounding box of the disk. `prune_empty` may only be set
/// for functions without poles, where a zero winding means no zeros.
fn locate(f: &Expr, r: f64, prune_empty: bool) -> Result<Located> {
    let tracker = Tracker::new(f);
    let mut last = None;
    for attempt in 0..4 {
        let h = bounding_half_width(r, attempt);
        let root = Rect { x0: -h, x1: h, y0: -h, y1: h };
        let w = match tracker.rect_winding(&root) {
            Ok(w) => w,
            Err(e) => {
                last = Some(e);
                continue;
            }
        };
        let mut search = Search {
            tracker: &tracker,
            prune_empty,
            // Without pruning every box is split down to this size, which
            // bounds how close a zero and a pole can be before they cancel.
            forced_side: if prune_empty { f64::INFINITY } else { 2.0 * h / 16.0 },
            min_side: 1e-9 * (1.0 + r),
            zeros: Vec::new(),
            poles: Vec::new(),
            leaves: 0,
        };
        search.resolve(root, w, 0)?;
        return Ok(Located {
            zeros: search.zeros,
            poles: search.poles,
            root: w,
            leaves: search.leaves,
            half_width: h,
        });
    }
    Err(last.expect("at least one attempt"))
}

#[derive(Debug, Clone, Copy)]
struct Rect {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
}

impl Rect {
    fn side(&self) -> f64 {
        (self.x1 - self.x0).max(self.y1 - self.y0)
    }

    fn center(&self) -> Complex64 {
        Complex64::new(0.5 * (self.x0 + self.x1), 0.5 * (self.y0 + self.y1))
    }

    fn contains(&self, z: Complex64) -> bool {
        z.re > self.x0 && z.re < self.x1 && z.im > self.y0 && z.im < self.y1
    }

    fn clearance(&self, z: Complex64) -> f64 {
        (z.re - self.x0).min(self.x1 - z.re).min(z.im - self.y0).min(self.y1 - z.im)
    }

    fn split(&self, sx: f64, sy: f64) -> [Rect; 4] {
        let xm = self.x0 + sx * (self.x1 - self.x0);
        let ym = self.y0 + sy * (self.y1 - self.y0);
        [
            Rect { x0: self.x0, x1: xm, y0: self.y0, y1: ym },
            Rect { x0: xm, x1: self.x1, y0: self.y0, y1: ym },
            Rect { x0: self.x0, x1: xm, y0: ym, y1: self.y1 },
            Rect { x0: xm, x1: self.x1, y0: ym, y1: self.y1 },
        ]
    }

    fn bounds(&self) -> [f64; 4] {
        [self.x0, self.x1, self.y0, self.y1]
    }
}

struct Search<'a> {
    tracker: &'a Tracker<'a>,
    prune_empty: bool,
    forced_side: f64,
    min_side: f64,
    zeros: Vec<(Complex64, usize)>,
    poles: Vec<(Complex64, usize)>,
    leaves: i64,
}

impl Search<'_> {
    fn resolve(&mut self, rect: Rect, w: i64, depth: usize) -> Result<()> {
        let side = rect.side();
        if w == 0 && (self.prune_empty || side <= self.forced_side) {
            return Ok(());
        }
        if w != 0 && side <= self.forced_side {
            if let Some(p) = self.isolate(&rect, w) {
                self.record(p, w);
                return Ok(());
            }
        }
        if side < self.min_side || depth >= MAX_DEPTH {
            self.record(rect.center(), w);
            return Ok(());
        }
        let mut last = None;
        for (i, &sx) in SPLITS.iter().enumerate() {
            let sy = SPLITS[(i + 1) % SPLITS.len()];
            let children = rect.split(sx, sy);
            let windings: Result<Vec<i64>> =
                children.iter().map(|c| self.tracker.rect_winding(c)).collect();
            match windings {
                Ok(ws) if ws.iter().sum::<i64>() == w => {
                    for (c, cw) in children.into_iter().zip(ws) {
                        self.resolve(c, cw, depth + 1)?;
                    }
                    return Ok(());
                }
                Ok(ws) => {
                    last = Some(Error::NonIntegerWinding {
                        value: ws.iter().sum::<i64>() as f64,
                        rect: rect.bounds(),
                    })
                }
                Err(e) => last = Some(e),
            }
        }
        Err(last.expect("at least one split"))
    }

    fn record(&mut self, p: Complex64, w: i64) {
        self.leaves += w;
        if w > 0 {
            self.zeros.push((p, w as usize));
        } else if w < 0 {
            self.poles.push((p, w.unsigned_abs() as usize));
        }
    }

    /// Newton from the box centre; accepted when a small circle around the
    /// limit carries the whole winding of the box.
    fn isolate(&self, rect: &Rect, w: i64) -> Option<Complex64> {
        let p = self.tracker.newton(rect.center(), w as f64, rect.side())?;
        if !rect.contains(p) {
            return None;
        }
        let s = (0.9 * rect.clearance(p)).min(RESOLUTION * (1.0 + p.norm()));
        if s <= 1e-13 * (1.0 + p.norm()) {
            return None;
        }
        match self.tracker.circle(p, s) {
            Ok(cw) if cw == w => Some(p),
            _ => None,
        }
    }
}

/// Evaluation state shared by all contours of one function.
struct Tracker<'a> {
    f: &'a Expr,
    df: Expr,
    evals: Cell<usize>,
    // Signed argument change along an edge keyed by its endpoints, so that
    // edges shared by neighbouring boxes are tracked once.
    edges: RefCell<HashMap<[u64; 4], f64>>,
}

#[derive(Clone, Copy)]
struct Sample {
    z: Complex64,
    arg: f64,
    /// `f'/f` at `z`.
    rate: Complex64,
}

impl<'a> Tracker<'a> {
    fn new(f: &'a Expr) -> Self {
        Tracker { f, df: f.derivative(), evals: Cell::new(0), edges: RefCell::new(HashMap::new()) }
    }

    fn sample(&self, z: Complex64) -> Result<Sample> {
        let n = self.evals.get() + 1;
        self.evals.set(n);
        if n > EVAL_BUDGET {
            return Err(Error::Contour("evaluation budget exhausted".into()));
        }
        let lf = match self.f.eval_log(z) {
            LogOutcome::Value(LogValue::Log(l)) if l.re.is_finite() && l.im.is_finite() => l,
            _ => {
                return Err(Error::Contour(format!(
                    "zero or singularity on the contour near {z}"
                )))
            }
        };
        let rate = match self.df.eval_log(z) {
            LogOutcome::Value(LogValue::Zero) => Complex64::new(0.0, 0.0),
            LogOutcome::Value(LogValue::Log(l)) => {
                let d = l - lf;
                if d.re > 600.0 {
                    Complex64::new(f64::INFINITY, 0.0)
                } else {
                    d.exp()
                }
            }
            _ => Complex64::new(f64::INFINITY, 0.0),
        };
        Ok(Sample { z, arg: lf.im, rate })
    }

    /// Change of `arg f` along `curve(t)`, `t ∈ [t0, t1]`.
    fn track(&self, curve: &dyn Fn(f64) -> Complex64, t0: f64, t1: f64) -> Result<f64> {
        let mut total = 0.0;
        let mut stack = Vec::new();
        let n = INITIAL_SEGMENTS;
        let pts: Vec<(f64, Sample)> = (0..=n)
            .map(|k| {
                let t = t0 + (t1 - t0) * k as f64 / n as f64;
                self.sample(curve(t)).map(|s| (t, s))
            })
            .collect::<Result<_>>()?;
        for k in (0..n).rev() {
            stack.push((pts[k], pts[k + 1]));
        }
        while let Some(((ta, a), (tb, b))) = stack.pop() {
            let dz = b.z - a.z;
            let d = wrap(b.arg - a.arg);
            let smooth = d.abs() <= MAX_STEP_ARG
                && (a.rate * dz).norm() <= MAX_STEP_ARG
                && (b.rate * dz).norm() <= MAX_STEP_ARG;
            if smooth {
                total += d;
                continue;
            }
            if dz.norm() < 1e-12 * (1.0 + a.z.norm()) {
                return Err(Error::Contour(format!(
                    "zero or singularity on the contour near {}",
                    a.z
                )));
            }
            let tm = 0.5 * (ta + tb);
            let m = self.sample(curve(tm))?;
            stack.push(((tm, m), (tb, b)));
            stack.push(((ta, a), (tm, m)));
        }
        Ok(total)
    }

    fn segment(&self, a: Complex64, b: Complex64) -> Result<f64> {
        let key = |p: Complex64, q: Complex64| [p.re.to_bits(), p.im.to_bits(), q.re.to_bits(), q.im.to_bits()];
        if let Some(&v) = self.edges.borrow().get(&key(a, b)) {
            return Ok(v);
        }
        if let Some(&v) = self.edges.borrow().get(&key(b, a)) {
            return Ok(-v);
        }
        let v = self.track(&|t| a + (b - a) * t, 0.0, 1.0)?;
        self.edges.borrow_mut().insert(key(a, b), v);
        Ok(v)
    }

    fn rect_winding(&self, r: &Rect) -> Result<i64> {
        let c = [
            Complex64::new(r.x0, r.y0),
            Complex64::new(r.x1, r.y0),
            Complex64::new(r.x1, r.y1),
            Complex64::new(r.x0, r.y1),
        ];
        let mut total = 0.0;
        for k in 0..4 {
            total += self.segment(c[k], c[(k + 1) % 4])?;
        }
        to_integer(total, r.bounds())
    }

    fn circle(&self, center: Complex64, radius: f64) -> Result<i64> {
        let total = self.track(&|t| center + Complex64::from_polar(radius, t), 0.0, TAU)?;
        to_integer(
            total,
            [center.re - radius, center.re + radius, center.im - radius, center.im + radius],
        )
    }

    /// Newton's method with multiplicity `m` (negative for poles).
    fn newton(&self, start: Complex64, m: f64, scale: f64) -> Option<Complex64> {
        let mut z = start;
        for _ in 0..NEWTON_ITERATIONS {
            let lf = match self.f.eval_log(z) {
                LogOutcome::Value(LogValue::Zero) => return Some(z),
                LogOutcome::Value(LogValue::Log(l)) => l,
                _ => return if m < 0.0 { Some(z) } else { None },
            };
            let ld = match self.df.eval_log(z) {
                LogOutcome::Value(LogValue::Log(l)) => l,
                _ => return None,
            };
            let step = (lf - ld).exp() * m;
            if !(step.re.is_finite() && step.im.is_finite()) {
                return None;
            }
            z -= step;
            if (z - start).norm() > 2.0 * scale {
                return None;
            }
            if step.norm() <= 1e-15 * (1.0 + z.norm()) {
                break;
            }
        }
        Some(z)
    }
}

fn wrap(a: f64) -> f64 {
    let w = a.rem_euclid(TAU);
    if w > PI {
        w - TAU
    } else {
        w
    }
}

fn to_integer(total: f64, rect: [f64; 4]) -> Result<i64> {
    let w = total / TAU;
    let k = w.round();
    if (w - k).abs() < 0.1 {
        Ok(k as i64)
    } else {
        Err(Error::NonIntegerWinding { value: w, rect })
    }
}

/// Removes zeros shared by numerator and denominator (removable points).
fn cancel_common(
    mut num: Vec<(Complex64, usize)>,
    mut den: Vec<(Complex64, usize)>,
) -> (Vec<(Complex64, usize)>, Vec<(Complex64, usize)>) {
    for d in den.iter_mut() {
        if let Some(n) = num
            .iter_mut()
            .filter(|n| n.1 > 0)
            .find(|n| (n.0 - d.0).norm() <= RESOLUTION * (1.0 + d.0.norm()))
        {
            let k = n.1.min(d.1);
            n.1 -= k;
            d.1 -= k;
        }
    }
    num.retain(|n| n.1 > 0);
    den.retain(|d| d.1 > 0);
    (num, den)
}

fn mul(a: Expr, b: Expr) -> Expr {
    if a.is_const_one() {
        b
    } else if b.is_const_one() {
        a
    } else {
        a * b
    }
}

/// Writes `e = N / D` with `N`, `D` syntactically entire, when the grammar
/// allows it.
pub(crate) fn fraction_parts(e: &Expr) -> Option<(Expr, Expr)> {
    if e.is_entire() {
        return Some((e.clone(), Expr::one()));
    }
    match e {
        Expr::Const(_) | Expr::Var => Some((e.clone(), Expr::one())),
        Expr::Unary(f, a) => {
            let (na, da) = fraction_parts(a)?;
            match f {
                Func::Neg => Some((-na, da)),
                Func::Tan if da.is_const_one() => Some((na.clone().sin(), na.cos())),
                _ => None,
            }
        }
        Expr::Binary(op, a, b) => {
            let (na, da) = fraction_parts(a)?;
            match op {
                BinOp::Pow => {
                    let n = b.as_const()?;
                    if n.im != 0.0 || n.re != n.re.round() || n.re.abs() > 64.0 {
                        return None;
                    }
                    let k = n.re as i32;
                    if k >= 0 {
                        Some((na.powi(k), da.powi(k)))
                    } else {
                        Some((da.powi(-k), na.powi(-k)))
                    }
                }
                _ => {
                    let (nb, db) = fraction_parts(b)?;
                    match op {
                        BinOp::Mul => Some((mul(na, nb), mul(da, db))),
                        BinOp::Div => Some((mul(na, db), mul(da, nb))),
                        BinOp::Add | BinOp::Sub => {
                            let left = mul(na, db.clone());
                            let right = mul(nb, da.clone());
                            let top = if *op == BinOp::Add { left + right } else { left - right };
                            Some((top, mul(da, db)))
                        }
                        BinOp::Pow => unreachable!(),
                    }
                }
            }
        }
    }
}

/// `1/e`, simplified when `e` is itself a reciprocal.
pub fn reciprocal(e: &Expr) -> Expr {
    match e {
        Expr::Binary(BinOp::Div, a, b) if a.is_const_one() => b.as_ref().clone(),
        Expr::Binary(BinOp::Div, a, b) => Expr::binary(BinOp::Div, b.as_ref().clone(), a.as_ref().clone()),
        _ => e.clone().recip(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> Expr {
        crate::expr::parse(s).unwrap()
    }

    #[test]
    fn sine_zeros_in_disk_of_radius_ten() {
        let zl = count_zeros(&parse("sin(z)"), 10.0).unwrap();
        assert_eq!(zl.zeros.len(), 7);
        for (z, m) in &zl.zeros {
            assert_eq!(*m, 1);
            let k = (z.re / PI).round();
            assert!((z - Complex64::new(k * PI, 0.0)).norm() < 1e-10, "{z}");
        }
        assert_eq!(zl.outer_winding, 7);
        assert_eq!(zl.leaf_winding_sum, zl.root_box_winding);
    }

    #[test]
    fn double_zero_at_origin() {
        let zl = count_zeros(&parse("z^2"), 1.0).unwrap();
        assert_eq!(zl.zeros.len(), 1);
        assert_eq!(zl.zeros[0].1, 2);
        assert!(zl.zeros[0].0.norm() < 1e-6);
    }

    #[test]
    fn exponential_has_no_zeros() {
        let zl = count_zeros(&parse("exp(z)"), 50.0).unwrap();
        assert!(zl.is_empty());
        assert_eq!(zl.outer_winding, 0);
    }

    #[test]
    fn rational_function_separates_zeros_and_poles() {
        let zl = count_zeros(&parse("(z^2+1)/(z-1)"), 3.0).unwrap();
        assert_eq!(zl.total(), 2);
        assert_eq!(zl.total_poles(), 1);
        assert_eq!(zl.outer_winding, 1);
        assert!((zl.poles[0].0 - Complex64::new(1.0, 0.0)).norm() < 1e-10);
    }

    #[test]
    fn removable_point_is_not_a_zero() {
        let zl = count_zeros(&parse("sin(z)/z"), 4.0).unwrap();
        assert_eq!(zl.total(), 2);
        assert_eq!(zl.total_poles(), 0);
    }

    #[test]
    fn squared_sine_has_double_zeros() {
        let zl = count_zeros(&parse("sin(z)^2"), 4.0).unwrap();
        assert_eq!(zl.zeros.len(), 3);
        assert!(zl.zeros.iter().all(|z| z.1 == 2));
    }

    #[test]
    fn polynomial_zeros_match_closed_form() {
        // z^3 - 1: cube roots of unity.
        let zl = count_zeros(&parse("z^3-1"), 2.0).unwrap();
        assert_eq!(zl.total(), 3);
        for (z, _) in &zl.zeros {
            assert!((z.powu(3) - 1.0).norm() < 1e-12);
        }
    }

    #[test]
    fn shifted_exponential_zeros_on_imaginary_axis() {
        // e^z + 1 vanishes at (2k+1)πi.
        let zl = count_zeros(&parse("exp(z)+1"), 20.0).unwrap();
        assert_eq!(zl.total(), 6);
        for (z, _) in &zl.zeros {
            assert!(z.re.abs() < 1e-10);
            let k = (z.im / PI - 1.0) / 2.0;
            assert!((k - k.round()).abs() < 1e-10);
        }
    }

    #[test]
    fn fraction_parts_of_tangent() {
        let (n, d) = fraction_parts(&parse("tan(pi*z) + z")).unwrap();
        assert!(n.is_entire() && d.is_entire());
        let z = Complex64::new(0.3, 0.2);
        let lhs = parse("tan(pi*z) + z").eval(z).value().unwrap();
        let rhs = n.eval(z).value().unwrap() / d.eval(z).value().unwrap();
        assert!((lhs - rhs).norm() < 1e-12);
    }

    #[test]
    fn tangent_poles_found() {
        let zl = count_zeros(&parse("tan(z)"), 5.0).unwrap();
        assert_eq!(zl.total(), 3);
        assert_eq!(zl.total_poles(), 4);
        assert_eq!(zl.outer_winding, -1);
    }
}

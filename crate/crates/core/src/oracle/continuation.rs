//! Analytic continuation of local solutions along polylines by an adaptive
//! Dormand–Prince 5(4) integrator with complex state.
//!
//! A solution is transported together with its companion so that the
//! Wronskian can be compared against Abel's identity
//! `W(z) = W(z0) exp(-∫ (γ/ζ + δ/(ζ-1) + ε/(ζ-a)) dζ)`.

use crate::heun_series::{HeunParams, LocalExpansion, LocalSolutionId, SubclassParams};
use crate::{Error, Result};
use num_complex::Complex64;

/// Series tolerance used when seeding the integrator.
const SEED_TOL: f64 = 1e-16;
const MAX_STEPS: usize = 1_000_000;
const MIN_STEP: f64 = 1e-14;

type State = [Complex64; 4];

fn distance_to_segment(a: Complex64, b: Complex64, p: Complex64) -> (f64, Complex64) {
    let d = b - a;
    let len2 = d.norm_sqr();
    let t = if len2 == 0.0 {
        0.0
    } else {
        (((p - a) * d.conj()).re / len2).clamp(0.0, 1.0)
    };
    let closest = a + d * t;
    ((closest - p).norm(), closest)
}

/// A polyline kept at least `min_singularity_distance` away from the finite
/// singular points `0, 1, a`.
#[derive(Debug, Clone, PartialEq)]
pub struct ContinuationPath {
    waypoints: Vec<Complex64>,
    min_singularity_distance: f64,
}

impl ContinuationPath {
    /// Validates against the subclass singularities `0, 1, -1`.
    pub fn new(waypoints: Vec<Complex64>, min_singularity_distance: f64) -> Result<Self> {
        Self::with_singularities(
            waypoints,
            min_singularity_distance,
            &[Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0)],
        )
    }

    pub fn with_singularities(
        waypoints: Vec<Complex64>,
        min_singularity_distance: f64,
        singularities: &[Complex64],
    ) -> Result<Self> {
        if waypoints.is_empty() {
            return Err(Error::InvalidParameters("a path needs at least one waypoint".into()));
        }
        if !(min_singularity_distance > 0.0) {
            return Err(Error::InvalidParameters(format!(
                "minimum singularity distance must be positive, got {min_singularity_distance}"
            )));
        }
        let segments: Vec<(Complex64, Complex64)> = if waypoints.len() == 1 {
            vec![(waypoints[0], waypoints[0])]
        } else {
            waypoints.windows(2).map(|w| (w[0], w[1])).collect()
        };
        for (a, b) in segments {
            for &s in singularities {
                let (distance, point) = distance_to_segment(a, b, s);
                if distance < min_singularity_distance {
                    return Err(Error::PathTooCloseToSingularity {
                        point,
                        singularity: s,
                        distance,
                        minimum: min_singularity_distance,
                    });
                }
            }
        }
        Ok(Self {
            waypoints,
            min_singularity_distance,
        })
    }

    /// `seed → |target| e^{i arg seed} → arc → target`, with arc chords of at
    /// most `max_angle` radians. Seed and target must share a half-plane.
    pub fn radial_then_arc(
        seed: Complex64,
        target: Complex64,
        max_angle: f64,
        min_singularity_distance: f64,
    ) -> Result<Self> {
        let radius = target.norm();
        let (theta0, theta1) = (seed.arg(), target.arg());
        let sweep = theta1 - theta0;
        let chords = ((sweep.abs() / max_angle).ceil() as usize).max(1);
        let mut points = vec![seed, Complex64::from_polar(radius, theta0)];
        for j in 1..chords {
            points.push(Complex64::from_polar(radius, theta0 + sweep * j as f64 / chords as f64));
        }
        points.push(target);
        points.dedup();
        Self::new(points, min_singularity_distance)
    }

    pub fn waypoints(&self) -> &[Complex64] {
        &self.waypoints
    }
    pub fn start(&self) -> Complex64 {
        self.waypoints[0]
    }
    pub fn end(&self) -> Complex64 {
        self.waypoints[self.waypoints.len() - 1]
    }
    pub fn min_singularity_distance(&self) -> f64 {
        self.min_singularity_distance
    }
    pub fn is_closed(&self) -> bool {
        self.start() == self.end()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContinuationResult {
    pub value: Complex64,
    pub derivative: Complex64,
    pub companion_value: Complex64,
    pub companion_derivative: Complex64,
    /// Accumulated local error estimates of the accepted steps.
    pub est_error: f64,
    /// `|W - W_Abel| / |W_Abel|` at the end point.
    pub wronskian_drift: f64,
    pub steps: usize,
    pub rejected: usize,
}

// Dormand–Prince 5(4)
const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const B: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

struct System {
    p: HeunParams,
    singularities: [Complex64; 3],
}

impl System {
    fn new(p: HeunParams) -> Self {
        Self {
            singularities: [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0), p.a],
            p,
        }
    }

    /// d/dτ of the state along `z = a + τ d`.
    fn rhs(&self, z: Complex64, d: Complex64, y: &State) -> State {
        let p = &self.p;
        let drift = p.gamma / z + p.delta / (z - 1.0) + p.epsilon() / (z - p.a);
        let potential = (p.alpha * p.beta * z - p.q) / (z * (z - 1.0) * (z - p.a));
        [
            d * y[1],
            -d * (drift * y[1] + potential * y[0]),
            d * y[3],
            -d * (drift * y[3] + potential * y[2]),
        ]
    }

    fn distance(&self, z: Complex64) -> f64 {
        self.singularities
            .iter()
            .map(|s| (z - s).norm())
            .fold(f64::INFINITY, f64::min)
    }

    /// `∫_a^b` of the Wronskian drift coefficient along a straight segment.
    fn abel_increment(&self, a: Complex64, b: Complex64) -> Complex64 {
        let weights = [self.p.gamma, self.p.delta, self.p.epsilon()];
        self.singularities
            .iter()
            .zip(weights)
            .map(|(s, w)| w * ((b - s) / (a - s)).ln())
            .sum()
    }
}

fn norm_inf(y: &State) -> f64 {
    y.iter().map(|v| v.norm()).fold(0.0, f64::max)
}

struct Tally {
    est_error: f64,
    steps: usize,
    rejected: usize,
}

fn integrate_segment(
    sys: &System,
    a: Complex64,
    b: Complex64,
    state: &mut State,
    tol: f64,
    tally: &mut Tally,
) -> Result<()> {
    let d = b - a;
    let len = d.norm();
    if len == 0.0 {
        return Ok(());
    }
    let mut tau = 0.0f64;
    let mut h = (0.5 * sys.distance(a) / len).min(0.05);
    while tau < 1.0 {
        let z = a + d * tau;
        let cap = 0.5 * sys.distance(z) / len;
        h = h.min(cap).min(1.0 - tau);
        if h < MIN_STEP || tally.steps + tally.rejected > MAX_STEPS {
            return Err(Error::StepFailure { at: z, step: h * len });
        }
        let mut k = [[Complex64::new(0.0, 0.0); 4]; 7];
        for i in 0..7 {
            let mut yi = *state;
            for (j, kj) in k.iter().enumerate().take(i) {
                let aij = A[i][j];
                if aij != 0.0 {
                    for (c, v) in yi.iter_mut().zip(kj) {
                        *c += v * (h * aij);
                    }
                }
            }
            k[i] = sys.rhs(z + d * (h * C[i]), d, &yi);
        }
        let mut next = *state;
        let mut err = [Complex64::new(0.0, 0.0); 4];
        for i in 0..7 {
            for c in 0..4 {
                next[c] += k[i][c] * (h * B[i]);
                err[c] += k[i][c] * (h * E[i]);
            }
        }
        let scale = tol * norm_inf(state).max(norm_inf(&next)).max(f64::MIN_POSITIVE);
        let ratio = norm_inf(&err) / scale;
        if !ratio.is_finite() {
            return Err(Error::StepFailure { at: z, step: h * len });
        }
        if ratio <= 1.0 {
            tau += h;
            *state = next;
            tally.est_error += norm_inf(&err);
            tally.steps += 1;
        } else {
            tally.rejected += 1;
        }
        let grow = if ratio == 0.0 { 5.0 } else { (0.9 * ratio.powf(-0.2)).clamp(0.2, 5.0) };
        h *= grow;
    }
    Ok(())
}

fn seed(expansion: &LocalExpansion, z: Complex64) -> Result<(Complex64, Complex64)> {
    let jet = expansion.jet(z, SEED_TOL)?;
    Ok((jet.value, jet.first))
}

/// Continues `id` and its companion along `path`, seeded from their series
/// at the first waypoint.
pub fn continue_solution(
    id: LocalSolutionId,
    s: &SubclassParams,
    path: &ContinuationPath,
    tol: f64,
) -> Result<ContinuationResult> {
    if !(tol > 0.0) {
        return Err(Error::InvalidParameters(format!("tolerance must be positive, got {tol}")));
    }
    let z0 = path.start();
    let (y, dy) = seed(&id.build(s)?, z0)?;
    let (w, dw) = seed(&id.companion().build(s)?, z0)?;
    continue_state(&s.heun(), [y, dy, w, dw], path, tol)
}

/// Continues an arbitrary initial state `[y, y', w, w']` of the equation with
/// parameters `p`.
pub fn continue_state(
    p: &HeunParams,
    initial: State,
    path: &ContinuationPath,
    tol: f64,
) -> Result<ContinuationResult> {
    let sys = System::new(*p);
    let mut state = initial;
    let wronskian0 = state[0] * state[3] - state[1] * state[2];
    let mut log_ratio = Complex64::new(0.0, 0.0);
    let mut tally = Tally {
        est_error: 0.0,
        steps: 0,
        rejected: 0,
    };
    for seg in path.waypoints().windows(2) {
        integrate_segment(&sys, seg[0], seg[1], &mut state, tol, &mut tally)?;
        log_ratio -= sys.abel_increment(seg[0], seg[1]);
    }
    let predicted = wronskian0 * log_ratio.exp();
    let wronskian = state[0] * state[3] - state[1] * state[2];
    Ok(ContinuationResult {
        value: state[0],
        derivative: state[1],
        companion_value: state[2],
        companion_derivative: state[3],
        est_error: tally.est_error,
        wronskian_drift: (wronskian - predicted).norm() / predicted.norm(),
        steps: tally.steps,
        rejected: tally.rejected,
    })
}

/// Default local tolerance of the integrator in the verification routines.
pub const CONTINUATION_TOL: f64 = 1e-13;
/// Clearance kept from the singular points by generated paths.
pub const PATH_CLEARANCE: f64 = 0.1;

/// A path from a seed inside the disc of `id` to `z`: the seed sits at
/// distance 1/2 from the expansion point on the side of `Im z`, then the
/// path runs radially to `|z|` and along the circle `|ζ| = |z|`.
pub fn seeded_path(id: LocalSolutionId, z: Complex64) -> Result<ContinuationPath> {
    use crate::heun_series::Center;
    let center = match id.center() {
        Center::Finite(c) => c,
        Center::Infinity => {
            return Err(Error::InvalidParameters(format!(
                "{id} is expanded at infinity and is not continued from a seed"
            )))
        }
    };
    if z.im == 0.0 {
        return Err(Error::BranchCut {
            what: format!("continuation of {id} to a real point outside its disc"),
            z,
        });
    }
    let seed = center + Complex64::new(0.0, 0.5 * z.im.signum());
    ContinuationPath::radial_then_arc(seed, z, 15f64.to_radians(), PATH_CLEARANCE)
}

/// `id` at `z`: by its series when `z` is inside the disc and off the cut,
/// otherwise by continuation along [`seeded_path`].
pub fn evaluate_anywhere(id: LocalSolutionId, s: &SubclassParams, z: Complex64, tol: f64) -> Result<Complex64> {
    let local = id.build(s)?;
    if local.contains(z) {
        return local.evaluate(z, SEED_TOL);
    }
    let path = seeded_path(id, z)?;
    continue_solution(id, s, &path, tol).map(|r| r.value)
}

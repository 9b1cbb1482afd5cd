use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{LayoutError, LayoutParams};
use crate::scalar::Scalar;
use crate::ugraph::UGraph;

/// Positions and velocities of every node, indexed like the graph.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LayoutState<F> {
    pub positions: Vec<[F; 2]>,
    pub velocities: Vec<[F; 2]>,
    pub iteration: u64,
}

impl<F: Scalar> LayoutState<F> {
    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.positions
            .iter()
            .chain(&self.velocities)
            .all(|p| p[0].is_finite() && p[1].is_finite())
    }

    /// Largest distance any node moves in one step at the current velocities.
    pub fn max_displacement(&self, dt: F) -> F {
        self.velocities
            .iter()
            .map(|v| norm(*v) * dt)
            .fold(F::zero(), F::max)
    }

    /// Applies one integration step in place.
    pub fn advance(&mut self, graph: &UGraph, params: &LayoutParams<F>) -> Result<(), LayoutError> {
        params.validate()?;
        if graph.node_count() != self.len() || self.velocities.len() != self.len() {
            return Err(LayoutError::NodeMismatch {
                state: self.len(),
                graph: graph.node_count(),
            });
        }
        let forces = forces(&self.positions, graph, params);
        let max_speed = params.max_speed();
        for ((p, v), f) in self.positions.iter_mut().zip(&mut self.velocities).zip(forces) {
            let mut next = [
                params.damping * (v[0] + f[0] * params.dt),
                params.damping * (v[1] + f[1] * params.dt),
            ];
            let speed = norm(next);
            if speed > max_speed {
                let scale = max_speed / speed;
                next = [next[0] * scale, next[1] * scale];
            }
            *v = next;
            p[0] += next[0] * params.dt;
            p[1] += next[1] * params.dt;
        }
        self.iteration += 1;
        Ok(())
    }
}

fn norm<F: Scalar>(v: [F; 2]) -> F {
    v[0].hypot(v[1])
}

/// Net force on each node: pairwise repulsion, edge springs, and gravity.
fn forces<F: Scalar>(positions: &[[F; 2]], graph: &UGraph, params: &LayoutParams<F>) -> Vec<[F; 2]> {
    let n = positions.len();
    let eps = params.min_separation();
    let mut out = vec![[F::zero(); 2]; n];

    let repulsion = params.charge.abs();
    if repulsion > F::zero() {
        for i in 0..n {
            for j in (i + 1)..n {
                let (dir, d) = direction(positions[j], positions[i], eps);
                let magnitude = repulsion / (d * d);
                out[i][0] += dir[0] * magnitude;
                out[i][1] += dir[1] * magnitude;
                out[j][0] -= dir[0] * magnitude;
                out[j][1] -= dir[1] * magnitude;
            }
        }
    }

    for (i, j) in graph.edges() {
        let delta = [positions[j][0] - positions[i][0], positions[j][1] - positions[i][1]];
        let d = norm(delta);
        if d == F::zero() {
            continue;
        }
        let pull = params.spring_constant * (d - params.rest_length) / d;
        out[i][0] += delta[0] * pull;
        out[i][1] += delta[1] * pull;
        out[j][0] -= delta[0] * pull;
        out[j][1] -= delta[1] * pull;
    }

    for (f, p) in out.iter_mut().zip(positions) {
        f[0] += params.gravity * (params.center[0] - p[0]);
        f[1] += params.gravity * (params.center[1] - p[1]);
    }
    out
}

/// Unit vector from `from` to `to` and their distance, clamped below at `eps`.
/// Coincident points separate along the x axis.
fn direction<F: Scalar>(from: [F; 2], to: [F; 2], eps: F) -> ([F; 2], F) {
    let delta = [to[0] - from[0], to[1] - from[1]];
    let d = norm(delta);
    let dir = if d > F::zero() {
        [delta[0] / d, delta[1] / d]
    } else {
        [F::one(), F::zero()]
    };
    (dir, d.max(eps))
}

/// Seeded starting positions, uniform in the unit disc around the center,
/// no two exactly equal, all at rest.
pub fn init_layout<F: Scalar>(graph: &UGraph, seed: u64, params: &LayoutParams<F>) -> LayoutState<F> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut positions: Vec<[F; 2]> = Vec::with_capacity(graph.node_count());
    while positions.len() < graph.node_count() {
        let r = rng.gen::<f64>().sqrt();
        let theta = rng.gen::<f64>() * std::f64::consts::TAU;
        let p = [
            params.center[0] + F::of(r * theta.cos()),
            params.center[1] + F::of(r * theta.sin()),
        ];
        if !positions.contains(&p) {
            positions.push(p);
        }
    }
    LayoutState {
        velocities: vec![[F::zero(); 2]; positions.len()],
        positions,
        iteration: 0,
    }
}

/// One integration step, returning the new state.
pub fn step<F: Scalar>(
    state: &LayoutState<F>,
    graph: &UGraph,
    params: &LayoutParams<F>,
) -> Result<LayoutState<F>, LayoutError> {
    let mut next = state.clone();
    next.advance(graph, params)?;
    Ok(next)
}

/// Steps until no node moves `tol` or more in a step, or `max_iters` steps ran.
pub fn run_until<F: Scalar>(
    state: &LayoutState<F>,
    graph: &UGraph,
    params: &LayoutParams<F>,
    max_iters: usize,
    tol: F,
) -> Result<LayoutState<F>, LayoutError> {
    let mut current = state.clone();
    for _ in 0..max_iters {
        current.advance(graph, params)?;
        if current.max_displacement(params.dt) < tol {
            break;
        }
    }
    Ok(current)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quiet() -> LayoutParams<f64> {
        LayoutParams {
            charge: 0.0,
            gravity: 0.0,
            ..LayoutParams::default()
        }
    }

    fn at_rest(positions: Vec<[f64; 2]>) -> LayoutState<f64> {
        LayoutState {
            velocities: vec![[0.0; 2]; positions.len()],
            positions,
            iteration: 0,
        }
    }

    #[test]
    fn init_is_deterministic_and_distinct() {
        let g = UGraph::new(50);
        let p = LayoutParams::<f64>::default();
        let a = init_layout(&g, 7, &p);
        assert_eq!(a, init_layout(&g, 7, &p));
        assert_ne!(a, init_layout(&g, 8, &p));
        for (i, x) in a.positions.iter().enumerate() {
            assert!(x[0].hypot(x[1]) <= 1.0);
            assert!(a.positions[..i].iter().all(|y| y != x));
        }
        assert!(init_layout(&UGraph::new(0), 1, &p).is_empty());
    }

    #[test]
    fn spring_at_rest_length_is_equilibrium() {
        let g = UGraph::from_edges(2, [(0, 1)]);
        let s = at_rest(vec![[0.0, 0.0], [30.0, 0.0]]);
        let next = step(&s, &g, &quiet()).unwrap();
        assert_eq!(next.positions, s.positions);
        assert_eq!(next.iteration, 1);
    }

    #[test]
    fn lone_node_at_center_stays() {
        let g = UGraph::new(1);
        let params = LayoutParams {
            center: [5.0, -3.0],
            ..LayoutParams::default()
        };
        let s = at_rest(vec![[5.0, -3.0]]);
        assert_eq!(step(&s, &g, &params).unwrap().positions, s.positions);
    }

    #[test]
    fn coincident_nodes_separate() {
        let g = UGraph::new(2);
        let params = LayoutParams {
            charge: -1.0,
            gravity: 0.0,
            ..LayoutParams::default()
        };
        let s = at_rest(vec![[1.0, 1.0], [1.0, 1.0]]);
        let next = step(&s, &g, &params).unwrap();
        let d = (next.positions[0][0] - next.positions[1][0]).hypot(next.positions[0][1] - next.positions[1][1]);
        // Clamped distance 1e-3 * 30; each node gains 0.6 * 1 / 0.03^2 along x.
        let expected = 2.0 * 0.6 / (0.03f64 * 0.03);
        assert!((d - expected).abs() < 1e-9 * expected, "{d} vs {expected}");
        assert!(next.is_finite());
    }

    #[test]
    fn mismatch_is_an_error() {
        let s = at_rest(vec![[0.0, 0.0]]);
        assert_eq!(
            step(&s, &UGraph::new(2), &quiet()),
            Err(LayoutError::NodeMismatch { state: 1, graph: 2 })
        );
    }

    #[test]
    fn run_until_single_iteration() {
        let g = UGraph::from_edges(3, [(0, 1), (1, 2)]);
        let p = LayoutParams::<f64>::default();
        let s = init_layout(&g, 3, &p);
        let once = run_until(&s, &g, &p, 1, 0.0).unwrap();
        assert_eq!(once.iteration, 1);
        assert_eq!(once, step(&s, &g, &p).unwrap());
    }
}

use serde::{Deserialize, Serialize};

use super::GeneratingFunction;
use crate::error::{Error, Result};
use crate::scalar::find_root;

/// A point `(x, y)` of the lifted annulus.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MapPoint {
    pub x: f64,
    pub y: f64,
}

impl MapPoint {
    pub fn new(x: f64, y: f64) -> Self {
        MapPoint { x, y }
    }
}

const ROOT_TOL: f64 = 1e-15;

/// The twist map generated by `h`: solves `−∂₁h(x, X) = y` for `X` inside
/// `bracket` and returns `(X, ∂₂h(x, X))`.
pub fn induced_map<G: GeneratingFunction + ?Sized>(
    h: &G,
    p: MapPoint,
    bracket: (f64, f64),
) -> Result<MapPoint> {
    if !p.x.is_finite() || !p.y.is_finite() {
        return Err(Error::Domain(format!("non-finite map point {p:?}")));
    }
    let g = |big_x: f64| {
        let (d1, _) = h.partials(p.x, big_x);
        (-d1 - p.y, -h.second_partials(p.x, big_x).d12)
    };
    let big_x = find_root(g, bracket.0, bracket.1, ROOT_TOL)?;
    let (_, d2) = h.partials(p.x, big_x);
    Ok(MapPoint::new(big_x, d2))
}

/// [`induced_map`] with a bracket grown around `x` until it encloses the
/// root.
pub fn induced_map_auto<G: GeneratingFunction + ?Sized>(h: &G, p: MapPoint) -> Result<MapPoint> {
    let mut width = 1.0;
    for _ in 0..40 {
        let bracket = (p.x - width, p.x + width);
        match induced_map(h, p, bracket) {
            Err(Error::RootNotFound { .. }) => width *= 2.0,
            other => return other,
        }
    }
    Err(Error::RootNotFound {
        lo: p.x - width,
        hi: p.x + width,
    })
}

/// Central-difference Jacobian of the induced map at `p`, as
/// `[[∂X/∂x, ∂X/∂y], [∂Y/∂x, ∂Y/∂y]]`.
pub fn induced_map_jacobian<G: GeneratingFunction + ?Sized>(
    h: &G,
    p: MapPoint,
    step: f64,
) -> Result<[[f64; 2]; 2]> {
    let f = |q: MapPoint| induced_map_auto(h, q);
    let xp = f(MapPoint::new(p.x + step, p.y))?;
    let xm = f(MapPoint::new(p.x - step, p.y))?;
    let yp = f(MapPoint::new(p.x, p.y + step))?;
    let ym = f(MapPoint::new(p.x, p.y - step))?;
    let s = 2.0 * step;
    Ok([
        [(xp.x - xm.x) / s, (yp.x - ym.x) / s],
        [(xp.y - xm.y) / s, (yp.y - ym.y) / s],
    ])
}

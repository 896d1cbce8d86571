//! WebAssembly bindings for the browser demo in `www/`.
//!
//! The plain functions are what the page computes; the `wasm_*` wrappers only
//! convert errors to JavaScript exceptions.

use netmimo::analytic::{disjoint_average_rate, disjoint_rate_profile, ergodic_rate};
use netmimo::geometry::{sample_ppp, ClusterScheme, HexPartition, Point2D, Window};
use netmimo::network::NetworkParams;
use netmimo::zfbf::Direction;
use serde::Serialize;
use wasm_bindgen::prelude::*;

/// Fewer location nodes than the CLI default keep the disjoint average
/// responsive in the browser.
pub const DEMO_DISJOINT_NODES: usize = 8;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeploymentView {
    pub radius: f64,
    pub half_width: f64,
    pub user: [f64; 2],
    pub bs: Vec<[f64; 2]>,
    /// BSs within `radius` of the user.
    pub user_centric: Vec<usize>,
    /// Hexagon of the disjoint partition that holds the user's nearest BS.
    pub hexagon: Vec<[f64; 2]>,
    pub disjoint: Vec<usize>,
}

fn direction(s: &str) -> Result<Direction, String> {
    match s {
        "UL" | "ul" | "uplink" => Ok(Direction::Uplink),
        "DL" | "dl" | "downlink" => Ok(Direction::Downlink),
        _ => Err(format!("unknown direction `{s}` (UL or DL)")),
    }
}

fn scheme(s: &str) -> Result<ClusterScheme, String> {
    match s {
        "user-centric" => Ok(ClusterScheme::UserCentric),
        "disjoint" => Ok(ClusterScheme::Disjoint),
        _ => Err(format!("unknown scheme `{s}` (user-centric or disjoint)")),
    }
}

fn params(bbar: f64) -> Result<NetworkParams, String> {
    NetworkParams::reference(bbar).map_err(|e| e.to_string())
}

/// BS layout around a user at the origin, with both serving clusters marked.
pub fn deployment(bbar: f64, seed: u32) -> Result<DeploymentView, String> {
    let p = params(bbar)?;
    let half = 3.0 * p.radius.max(1.0 / (std::f64::consts::PI * p.lambda_b).sqrt());
    let window = Window::centered_square(half).map_err(|e| e.to_string())?;
    let bs = sample_ppp(p.lambda_b, &window, u64::from(seed)).map_err(|e| e.to_string())?;
    let user = Point2D::ORIGIN;
    let user_centric = (0..bs.len()).filter(|&i| bs[i].dist(&user) <= p.radius).collect();
    let part = HexPartition::from_disk_radius(p.radius).map_err(|e| e.to_string())?;
    let nearest = (0..bs.len()).min_by(|&a, &b| bs[a].dist_sq(&user).total_cmp(&bs[b].dist_sq(&user)));
    let (hexagon, disjoint) = match nearest {
        Some(n) => {
            let idx = part.locate(&bs[n]);
            let members = (0..bs.len()).filter(|&i| part.locate(&bs[i]) == idx).collect();
            (part.vertices(idx).iter().map(|v| [v.x, v.y]).collect(), members)
        }
        None => (Vec::new(), Vec::new()),
    };
    Ok(DeploymentView {
        radius: p.radius,
        half_width: half,
        user: [user.x, user.y],
        bs: bs.iter().map(|b| [b.x, b.y]).collect(),
        user_centric,
        hexagon,
        disjoint,
    })
}

/// Analytic ergodic rate in bits/s/Hz.
pub fn rate(bbar: f64, scheme_name: &str, direction_name: &str) -> Result<f64, String> {
    let p = params(bbar)?;
    let (s, d) = (scheme(scheme_name)?, direction(direction_name)?);
    match s {
        ClusterScheme::UserCentric => ergodic_rate(&p, s, d, None),
        ClusterScheme::Disjoint => disjoint_average_rate(&p, d, DEMO_DISJOINT_NODES),
    }
    .map_err(|e| e.to_string())
}

/// Disjoint-cluster rate against the distance to the cluster center, flattened
/// as `[d, weight, rate, d, weight, rate, …]`.
pub fn profile(bbar: f64, direction_name: &str, nodes: usize) -> Result<Vec<f64>, String> {
    let p = params(bbar)?;
    let prof = disjoint_rate_profile(&p, direction(direction_name)?, nodes).map_err(|e| e.to_string())?;
    Ok(prof.into_iter().flat_map(|(d, w, c)| [d, w, c]).collect())
}

#[wasm_bindgen(js_name = deployment)]
pub fn wasm_deployment(bbar: f64, seed: u32) -> Result<String, JsError> {
    let view = deployment(bbar, seed).map_err(|e| JsError::new(&e))?;
    serde_json::to_string(&view).map_err(|e| JsError::new(&e.to_string()))
}

#[wasm_bindgen(js_name = rate)]
pub fn wasm_rate(bbar: f64, scheme: &str, direction: &str) -> Result<f64, JsError> {
    rate(bbar, scheme, direction).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = profile)]
pub fn wasm_profile(bbar: f64, direction: &str, nodes: usize) -> Result<Vec<f64>, JsError> {
    profile(bbar, direction, nodes).map_err(|e| JsError::new(&e))
}

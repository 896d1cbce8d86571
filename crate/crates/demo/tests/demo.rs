use netmimo::analytic::{disjoint_average_rate, ergodic_rate};
use netmimo::geometry::ClusterScheme;
use netmimo::network::NetworkParams;
use netmimo::zfbf::Direction;
use netmimo_demo::{deployment, profile, rate, DEMO_DISJOINT_NODES};

#[test]
fn deployment_marks_clusters_consistently() {
    let v = deployment(6.0, 7).unwrap();
    assert!(!v.bs.is_empty());
    for &i in &v.user_centric {
        let [x, y] = v.bs[i];
        assert!(x.hypot(y) <= v.radius);
    }
    let outside = (0..v.bs.len()).filter(|i| !v.user_centric.contains(i));
    for i in outside {
        let [x, y] = v.bs[i];
        assert!(x.hypot(y) > v.radius);
    }
    assert_eq!(v.hexagon.len(), 6);
    assert!(!v.disjoint.is_empty());
    for [x, y] in &v.bs {
        assert!(x.abs() <= v.half_width && y.abs() <= v.half_width);
    }
}

#[test]
fn deployment_is_seeded_and_serializes() {
    assert_eq!(deployment(4.0, 3).unwrap(), deployment(4.0, 3).unwrap());
    assert_ne!(deployment(4.0, 3).unwrap().bs, deployment(4.0, 4).unwrap().bs);
    let json = serde_json::to_value(deployment(2.0, 1).unwrap()).unwrap();
    for key in [
        "radius",
        "half_width",
        "user",
        "bs",
        "user_centric",
        "hexagon",
        "disjoint",
    ] {
        assert!(json.get(key).is_some(), "missing {key}");
    }
}

#[test]
fn rates_match_the_library() {
    let p = NetworkParams::reference(6.0).unwrap();
    let uc = ergodic_rate(&p, ClusterScheme::UserCentric, Direction::Downlink, None).unwrap();
    assert_eq!(rate(6.0, "user-centric", "DL").unwrap(), uc);
    let dj = disjoint_average_rate(&p, Direction::Uplink, DEMO_DISJOINT_NODES).unwrap();
    assert_eq!(rate(6.0, "disjoint", "UL").unwrap(), dj);
}

#[test]
fn profile_is_flat_triples_with_unit_weight() {
    let flat = profile(4.0, "UL", 6).unwrap();
    assert_eq!(flat.len(), 18);
    let total: f64 = flat.chunks(3).map(|c| c[1]).sum();
    assert!((total - 1.0).abs() < 1e-12, "weights sum to {total}");
    let avg: f64 = flat.chunks(3).map(|c| c[1] * c[2]).sum();
    let p = NetworkParams::reference(4.0).unwrap();
    assert!((avg - disjoint_average_rate(&p, Direction::Uplink, 6).unwrap()).abs() < 1e-12);
}

#[test]
fn bad_inputs_are_reported() {
    assert!(rate(6.0, "hexagonal", "UL").unwrap_err().contains("scheme"));
    assert!(rate(6.0, "disjoint", "up").unwrap_err().contains("direction"));
    assert!(rate(-1.0, "disjoint", "UL").is_err());
    assert!(profile(6.0, "DL", 0).is_err());
    assert!(deployment(f64::NAN, 0).is_err());
}

//! Frozen values. Expected numbers were computed by independent
//! brute-force evaluation, not by this crate.

use regionloc::distance::centroid_distance_matrix;
use regionloc::io::write_grid;
use regionloc::{
    brute_force_representative_point, distance_matrix, fixture, generate, objective, representative_point, Cell,
    FacilityInstance, GenConfig, ObjectiveMode, Point, RasterRegion,
};
use sha2::{Digest, Sha256};

fn l_shape() -> RasterRegion {
    RasterRegion::new(1, [(0, 0), (1, 0), (2, 0), (3, 0), (0, 1), (0, 2), (0, 3)])
}

#[test]
fn l_shape_centroid_outside() {
    let r = l_shape();
    let g = r.centroid();
    assert!((g.x - 19.0 / 14.0).abs() < 1e-15 && (g.y - 19.0 / 14.0).abs() < 1e-15);
    assert!(!r.contains(g));

    let sq = representative_point(&r, ObjectiveMode::Squared).unwrap();
    assert_eq!(sq.point, Point::new(0.5, 1.5));
    assert_eq!(sq.objective_value, 23.0);
    assert!(!sq.used_centroid_shortcut);

    let eu = representative_point(&r, ObjectiveMode::Euclidean).unwrap();
    assert_eq!(eu.point, Point::new(0.5, 1.5));
    assert!((eu.objective_value - 10.812559200041264).abs() < 1e-12);
}

#[test]
fn ring_objectives() {
    let ring = RasterRegion::new(1, [(0, 0), (1, 0), (2, 0), (0, 1), (2, 1), (0, 2), (1, 2), (2, 2)]);
    let sq = representative_point(&ring, ObjectiveMode::Squared).unwrap();
    assert_eq!((sq.point, sq.objective_value), (Point::new(0.5, 1.5), 20.0));
    let eu = representative_point(&ring, ObjectiveMode::Euclidean).unwrap();
    assert_eq!(eu.point, Point::new(0.5, 1.5));
    assert!((eu.objective_value - 11.30056307974577).abs() < 1e-12);
    // the hole's center would score lower but is not in the region
    assert!(objective(&ring, Point::new(1.5, 1.5), ObjectiveMode::Squared) < sq.objective_value);
}

#[test]
fn divergence_witness() {
    let r = RasterRegion::new(1, [(0, 0), (1, 2), (1, 3), (1, 4)]);
    assert_eq!(r.centroid(), Point::new(1.25, 2.75));
    let sq = brute_force_representative_point(&r, ObjectiveMode::Squared).unwrap();
    let eu = brute_force_representative_point(&r, ObjectiveMode::Euclidean).unwrap();
    assert_eq!(sq.cell, Cell::new(1, 2));
    assert_eq!(eu.cell, Cell::new(1, 3));
    let at_sq = objective(&r, sq.point, ObjectiveMode::Euclidean);
    assert!(at_sq - eu.objective_value > 0.07);
}

#[test]
fn fixture_distances() {
    let f1 = fixture(1).unwrap();
    for mode in ObjectiveMode::ALL {
        assert_eq!(distance_matrix(&f1, mode).unwrap().get(0, 1), 4.0);
    }

    let f2 = fixture(2).unwrap();
    let geo = centroid_distance_matrix(&f2).unwrap();
    assert_eq!((geo.get(0, 1), geo.get(1, 2)), (5.0, 10.0));
    for mode in ObjectiveMode::ALL {
        let m = distance_matrix(&f2, mode).unwrap();
        assert_eq!((m.get(0, 1), m.get(1, 2), m.get(0, 2)), (8.0, 7.0, 15.0));
    }

    // nearest possible: neighbouring cells
    let f3 = fixture(3).unwrap();
    assert_eq!(centroid_distance_matrix(&f3).unwrap().get(0, 1), 0.0);
    for mode in ObjectiveMode::ALL {
        assert_eq!(distance_matrix(&f3, mode).unwrap().get(0, 1), 1.0);
    }
}

#[test]
fn table_pair_distance() {
    let inst = FacilityInstance::from_sites(
        vec![Point::new(189.0, 25.0), Point::new(186.0, 66.0)],
        vec![9, 10],
        200.0,
        50.0,
        10_000.0,
        ObjectiveMode::Squared,
    )
    .unwrap();
    assert_eq!(inst.distance(0, 1), 1690f64.sqrt());
}

#[test]
fn generated_map_regression() {
    let (map, demands) = generate(&GenConfig::default()).unwrap();
    let digest = Sha256::digest(write_grid(&map).as_bytes());
    let hex: String = digest.iter().map(|b| format!("{b:02x}")).collect();
    assert_eq!(hex, "3a0714e2f3e589fda4664c4ac23c28e2072d805d4def549148b7f69d3405297d");
    assert_eq!(
        demands,
        vec![1, 2, 10, 10, 7, 8, 8, 10, 6, 6, 8, 2, 4, 3, 5, 10, 7, 8, 10, 7, 6, 6, 1, 9, 10, 4, 9, 10, 9]
    );
}

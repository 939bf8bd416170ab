//! Closed-form panel placements along the radial path.
//!
//! The fold is parameterized by the travel `s`: every reserved face
//! translates inward by `s` along its own normal, cores sink by `sigma(s)`,
//! and trapezoids and square halves rotate about their moving hinge lines so
//! the panel chain stays closed. These placements satisfy every hinge
//! constraint identically; the numerical tracer is checked against them.

use super::{HollowClass, KirigamiPattern, PanelMotion};
use crate::geom::{signed_dihedral, Placement};
use nalgebra::Vector3;
use std::collections::BTreeMap;

/// Rigid delta from the deployed placement for one panel at travel `s`.
pub fn motion_placement(motion: &PanelMotion, classes: &[HollowClass], s: f64) -> Placement {
    match motion {
        PanelMotion::Translate { dir } => Placement::from_translation(-dir * s),
        PanelMotion::Sink { class, dir } => {
            Placement::from_translation(-dir * classes[*class].sigma(s))
        }
        PanelMotion::Swing {
            class,
            platform_dir,
            pivot,
            axis,
        } => {
            let psi = classes[*class].swing(s);
            Placement::from_translation(-platform_dir * s).compose(&Placement::rotation_about_line(
                pivot,
                &nalgebra::Unit::new_normalize(*axis),
                psi,
            ))
        }
        PanelMotion::Tent {
            platform_dir,
            pivot,
            axis,
            chord,
            rate,
            outward,
        } => {
            let d0 = chord.norm();
            let m_hat = chord / d0;
            let d = d0 - s * rate;
            assert!(d > -1e-9, "square half folded past flat");
            // The free edges of the two halves meet at the tent apex, pushed
            // into the solid; the crease between them is a valley.
            let mut inward = axis.cross(&m_hat);
            if inward.dot(outward) > 0.0 {
                inward = -inward;
            }
            inward.normalize_mut();
            let apex_rel = m_hat * (d * 0.5) + inward * ((d0 * d0 - d * d).max(0.0).sqrt() * 0.5);
            let w0 = m_hat * (d0 * 0.5);
            let chi = (w0.cross(&apex_rel).dot(axis)).atan2(w0.dot(&apex_rel));
            Placement::from_translation(-platform_dir * s).compose(&Placement::rotation_about_line(
                pivot,
                &nalgebra::Unit::new_normalize(*axis),
                chi,
            ))
        }
    }
}

/// Deltas for every panel at travel `s`, keyed by sheet id.
pub fn radial_placements(pattern: &KirigamiPattern, s: f64) -> BTreeMap<String, Placement> {
    let profile = &pattern.profile;
    profile
        .motions
        .iter()
        .map(|(id, m)| (id.clone(), motion_placement(m, &profile.classes, s)))
        .collect()
}

/// Signed dihedral across hinge `h` in the closed-form state at travel `s`,
/// measured about the axis as carried by panel A.
pub fn dihedral_at(pattern: &KirigamiPattern, h: usize, s: f64) -> f64 {
    let hinge = &pattern.hinges[h];
    let profile = &pattern.profile;
    let da = motion_placement(&profile.motions[&hinge.panel_a], &profile.classes, s);
    let db = motion_placement(&profile.motions[&hinge.panel_b], &profile.classes, s);
    let a = pattern.sheet(&hinge.panel_a).expect("hinge panel exists");
    let b = pattern.sheet(&hinge.panel_b).expect("hinge panel exists");
    let n_a = da.apply_vector(&a.world_normal());
    let n_b = db.apply_vector(&b.world_normal());
    let (p0, p1) = pattern.world_axis(h);
    let axis = da.apply_vector(&(p1 - p0).normalize());
    signed_dihedral(&n_a, &n_b, &axis)
}

/// Dihedral at the designated driving crease at travel `s`.
pub fn driving_dihedral(pattern: &KirigamiPattern, s: f64) -> f64 {
    dihedral_at(pattern, pattern.profile.driving_hinge, s)
}

/// Travel at which the driving crease reaches dihedral `theta`; the driving
/// dihedral is monotone over the whole path.
pub fn travel_of_driving_angle(pattern: &KirigamiPattern, theta: f64) -> f64 {
    let s_end = pattern.profile.s_end;
    let lo = driving_dihedral(pattern, 0.0);
    let hi = driving_dihedral(pattern, s_end);
    let rising = hi > lo;
    let (mut a, mut b) = (0.0_f64, s_end);
    assert!(
        (theta - lo) * (theta - hi) <= 1e-9,
        "driving angle {theta} outside the path range [{lo}, {hi}]"
    );
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        let v = driving_dihedral(pattern, mid);
        if (v < theta) == rising {
            a = mid;
        } else {
            b = mid;
        }
    }
    0.5 * (a + b)
}

/// World positions of every panel's boundary at travel `s`.
pub fn world_boundaries(pattern: &KirigamiPattern, s: f64) -> BTreeMap<String, Vec<Vector3<f64>>> {
    let deltas = radial_placements(pattern, s);
    pattern
        .sheets
        .iter()
        .map(|sheet| {
            let delta = &deltas[&sheet.id];
            let ring = sheet
                .world_boundary()
                .into_iter()
                .map(|w| delta.apply(&w))
                .collect();
            (sheet.id.clone(), ring)
        })
        .collect()
}

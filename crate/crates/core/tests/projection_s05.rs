//! Cut, surgery and projection on the five-holed sphere: the smallest
//! surface with genuinely strict non-annular windows.

use taut_core::curve::{self, Ctx};
use taut_core::explorer::Distance;
use taut_core::projection::{self, DistanceOpts, ProjectionValue, SubsurfaceSpec};
use taut_core::surface::Surface;

fn setup() -> (Ctx, Vec<taut_core::MultiCurve>) {
    let s = Surface::new(0, 5).unwrap();
    let ctx = Ctx::new(&s).unwrap();
    let curves = curve::enumerate_curves(&ctx, 6).unwrap();
    assert!(!curves.is_empty(), "S_{{0,5}} has small essential curves");
    (ctx, curves)
}

#[test]
fn windows_of_a_curve_have_complexity_totals() {
    let (ctx, curves) = setup();
    // Every essential curve on S_{0,5} splits it into a pants and a
    // four-holed sphere (or a three- and four-marked piece); complexities
    // of the two sides add up to xi(S) - 1 = 1.
    let c = &curves[0];
    let probes = SubsurfaceSpec::sides_of(&ctx, c).unwrap();
    assert_eq!(probes.len(), 2, "a curve on a planar surface separates");
    let mut total = 0;
    for p in probes {
        let x = SubsurfaceSpec::component(c.clone(), p);
        x.validate(&ctx).unwrap();
        let shape = x.shape(&ctx).unwrap();
        assert_eq!(shape.genus, 0);
        total += shape.complexity();
    }
    assert_eq!(total, 1);
}

#[test]
fn projection_lands_in_window_with_small_diameter() {
    let (ctx, curves) = setup();
    // Find a boundary curve whose side is a four-holed-sphere window and
    // a curve crossing it.
    let mut tested = 0;
    for bdry in curves.iter().take(4) {
        let probes = SubsurfaceSpec::sides_of(&ctx, bdry).unwrap();
        for p in probes {
            let x = SubsurfaceSpec::component(bdry.clone(), p);
            let shape = x.shape(&ctx).unwrap();
            if shape.complexity() != 1 {
                continue;
            }
            for beta in &curves {
                let i = curve::intersection_number_in(&ctx, beta, bdry).unwrap();
                if i == 0 || i > 2 {
                    continue;
                }
                let proj = projection::project(&ctx, beta, &x).unwrap();
                let verts = match proj.value {
                    ProjectionValue::Curves(v) => v,
                    _ => unreachable!(),
                };
                if verts.is_empty() {
                    // beta may miss this side entirely.
                    continue;
                }
                // Every vertex is essential in X and disjoint from its
                // boundary.
                for v in &verts {
                    assert!(projection::in_subsurface_essential(&ctx, &x, v).unwrap());
                    assert_eq!(
                        curve::intersection_number_in(&ctx, v, bdry).unwrap(),
                        0
                    );
                }
                // Single-input projection has diameter <= 2 in C(X).
                let d = projection::subsurface_distance(
                    &ctx,
                    beta,
                    beta,
                    &x,
                    &DistanceOpts::default(),
                )
                .unwrap();
                assert!(d.is_exact());
                assert!(d.lo() <= 2, "diam pi_X(beta) = {} > 2", d.lo());
                tested += 1;
                if tested >= 6 {
                    return;
                }
            }
        }
    }
    assert!(tested > 0, "no crossing pair exercised the window");
}

#[test]
fn disjoint_pairs_project_close() {
    let (ctx, curves) = setup();
    // Lemma-style check at desk scale: disjoint curves cutting a common
    // complexity-one window have projection distance at most 3.
    let mut tested = 0;
    'outer: for bdry in curves.iter().take(3) {
        let probes = SubsurfaceSpec::sides_of(&ctx, bdry).unwrap();
        for p in probes {
            let x = SubsurfaceSpec::component(bdry.clone(), p);
            if x.shape(&ctx).unwrap().complexity() != 1 {
                continue;
            }
            for a in &curves {
                for b in &curves {
                    if curve::intersection_number_in(&ctx, a, b).unwrap() != 0
                        || a.coords == b.coords
                    {
                        continue;
                    }
                    let d = projection::subsurface_distance(
                        &ctx,
                        a,
                        b,
                        &x,
                        &DistanceOpts::default(),
                    );
                    let Ok(d) = d else { continue };
                    assert!(
                        matches!(d, Distance::Exact(v) if v <= 3),
                        "disjoint pair with d_X = {d:?}"
                    );
                    tested += 1;
                    if tested >= 12 {
                        break 'outer;
                    }
                }
            }
        }
    }
    assert!(tested > 0);
}

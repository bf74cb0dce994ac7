//! Randomized checks of each operation against an independent brute-force
//! oracle written over plain vectors.

use std::collections::{BTreeMap, BTreeSet};

use graphbridge_core::animation::{plan_animation, sample, scrub_progress, Role};
use graphbridge_core::color::{community_palette, Rgb};
use graphbridge_core::coordination::{
    classify_drop, linked_highlight, select_ids, select_lasso, translate_selection, Selection,
};
use graphbridge_core::geometry::{bounding_box, Point, Vector};
use graphbridge_core::graph::{
    edge_identity, load_dataset, slice, AttrValue, Comparison, Condition, EdgeKey, NodeId, ViewGraph, ViewSpec,
};
use graphbridge_core::layout::LayoutMap;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn nid(i: usize) -> NodeId {
    NodeId(format!("n{i:03}"))
}

fn random_view(rng: &mut ChaCha8Rng, id: &str, universe: usize, p_node: f64, p_edge: f64) -> ViewGraph {
    let nodes: Vec<usize> = (0..universe).filter(|_| rng.gen_bool(p_node)).collect();
    let mut edges = BTreeSet::new();
    for (k, &a) in nodes.iter().enumerate() {
        for &b in &nodes[k + 1..] {
            if rng.gen_bool(p_edge) {
                edges.insert(edge_identity(nid(a), nid(b)).unwrap());
            }
        }
    }
    ViewGraph::from_parts(id, nodes.into_iter().map(nid).collect(), edges, &BTreeMap::new()).unwrap()
}

fn random_layout(rng: &mut ChaCha8Rng, view: &ViewGraph) -> LayoutMap {
    LayoutMap::from_positions(
        view.view_id.clone(),
        view.node_ids.iter().map(|n| (n.clone(), Point::new(rng.gen(), rng.gen()))),
    )
}

fn random_selection(rng: &mut ChaCha8Rng, view: &ViewGraph, layout: &LayoutMap) -> Selection {
    let p: f64 = rng.gen();
    let ids: Vec<NodeId> = view.node_ids.iter().filter(|_| rng.gen_bool(p)).cloned().collect();
    select_ids(view, layout, &ids).unwrap()
}

#[test]
fn predicate_view_matches_linear_filter() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..25 {
        let kinds = ["core", "leaf", "hub"];
        let nodes: Vec<(String, &str, f64)> = (0..20)
            .map(|i| (format!("v{i:02}"), *kinds.choose(&mut rng).unwrap(), rng.gen_range(0..10) as f64))
            .collect();
        let doc = serde_json::json!({
            "frames": [{"id": "f", "label": "F", "order": 0}],
            "nodes": nodes.iter().map(|(id, kind, w)| serde_json::json!({
                "id": id, "attributes": {"type": kind, "w": w}, "frames": ["f"]
            })).collect::<Vec<_>>(),
            "edges": (0..19).map(|i| serde_json::json!({
                "source": nodes[i].0, "target": nodes[i + 1].0, "frames": ["f"]
            })).collect::<Vec<_>>(),
        });
        let g = load_dataset(doc.to_string().as_bytes()).unwrap();

        let spec = ViewSpec::predicate(
            "p",
            vec![Condition {
                attribute: "type".into(),
                op: Comparison::Eq,
                value: AttrValue::Text("core".into()),
            }],
        );
        let view = slice(&g, &spec).unwrap();
        let expected: Vec<&str> = nodes.iter().filter(|n| n.1 == "core").map(|n| n.0.as_str()).collect();
        assert_eq!(view.node_ids.iter().map(NodeId::as_str).collect::<Vec<_>>(), expected);
        let expected_edges: Vec<EdgeKey> = (0..19)
            .filter(|&i| nodes[i].1 == "core" && nodes[i + 1].1 == "core")
            .map(|i| edge_identity(nodes[i].0.as_str(), nodes[i + 1].0.as_str()).unwrap())
            .collect();
        assert_eq!(view.edge_ids.iter().cloned().collect::<Vec<_>>(), expected_edges);

        let threshold = rng.gen_range(0..10) as f64;
        let spec = ViewSpec::predicate(
            "w",
            vec![
                Condition {
                    attribute: "w".into(),
                    op: Comparison::Lt,
                    value: AttrValue::Number(threshold),
                },
                Condition {
                    attribute: "type".into(),
                    op: Comparison::Ne,
                    value: AttrValue::Text("hub".into()),
                },
            ],
        );
        let view = slice(&g, &spec).unwrap();
        let expected: Vec<&str> = nodes
            .iter()
            .filter(|n| n.2 < threshold && n.1 != "hub")
            .map(|n| n.0.as_str())
            .collect();
        assert_eq!(view.node_ids.iter().map(NodeId::as_str).collect::<Vec<_>>(), expected);
    }
}

/// Crossing-number test with a ray towards +y, written independently of
/// the library's +x ray.
fn ray_cast_up(p: Point, poly: &[Point]) -> bool {
    let mut crossings = 0;
    for i in 0..poly.len() {
        let a = poly[i];
        let b = poly[(i + 1) % poly.len()];
        if (a.x <= p.x && b.x > p.x) || (b.x <= p.x && a.x > p.x) {
            let y = a.y + (p.x - a.x) / (b.x - a.x) * (b.y - a.y);
            if y > p.y {
                crossings += 1;
            }
        }
    }
    crossings % 2 == 1
}

#[test]
fn lasso_matches_ray_casting() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..200 {
        let view = random_view(&mut rng, "v", 30, 1.0, 0.1);
        let layout = random_layout(&mut rng, &view);
        let k = rng.gen_range(3..12);
        let c = Point::new(rng.gen_range(0.3..0.7), rng.gen_range(0.3..0.7));
        let mut angles: Vec<f64> = (0..k).map(|_| rng.gen_range(0.0..std::f64::consts::TAU)).collect();
        angles.sort_by(f64::total_cmp);
        let star: Vec<Point> = angles
            .iter()
            .map(|a| {
                let r = rng.gen_range(0.05..0.6);
                Point::new(c.x + r * a.cos(), c.y + r * a.sin())
            })
            .collect();
        let sel = select_lasso(&view, &layout, &star).unwrap();
        let expected: BTreeSet<NodeId> = layout
            .positions()
            .iter()
            .filter(|(_, &p)| ray_cast_up(p, &star))
            .map(|(id, _)| id.clone())
            .collect();
        assert_eq!(sel.node_ids(), &expected);
    }
}

#[test]
fn select_ids_induces_like_edge_scan() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..100 {
        let view = random_view(&mut rng, "v", 50, 1.0, 0.08);
        let layout = random_layout(&mut rng, &view);
        let sel = random_selection(&mut rng, &view, &layout);
        let chosen: Vec<&NodeId> = sel.node_ids().iter().collect();
        let expected: Vec<EdgeKey> = view
            .edge_ids
            .iter()
            .filter(|e| chosen.contains(&e.lo()) && chosen.contains(&e.hi()))
            .cloned()
            .collect();
        assert_eq!(sel.edge_ids().iter().cloned().collect::<Vec<_>>(), expected);
        assert!(sel.grab_positions().iter().all(|(id, p)| layout.position(id) == Some(*p)));
    }
}

#[test]
fn highlight_equals_intersections_and_matches_drop() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for _ in 0..100 {
        let views: Vec<ViewGraph> = (0..4)
            .map(|k| random_view(&mut rng, &format!("v{k}"), 25, 0.7, 0.15))
            .collect();
        let layout = random_layout(&mut rng, &views[0]);
        let sel = random_selection(&mut rng, &views[0], &layout);
        let h = linked_highlight(&sel, &views);
        for v in &views {
            let nodes: Vec<&NodeId> = sel.node_ids().iter().filter(|n| v.node_ids.iter().any(|m| m == *n)).collect();
            let edges: Vec<&EdgeKey> = sel.edge_ids().iter().filter(|e| v.edge_ids.iter().any(|f| f == *e)).collect();
            assert!(h[&v.view_id].nodes.iter().eq(nodes));
            assert!(h[&v.view_id].edges.iter().eq(edges));
            let m = classify_drop(&sel, v);
            assert_eq!(m.matched_nodes, h[&v.view_id].nodes);
            assert_eq!(m.matched_edges, h[&v.view_id].edges);
        }
        assert_eq!(&h["v0"].nodes, sel.node_ids());
    }
}

#[test]
fn bounding_box_matches_scan() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    for _ in 0..50 {
        let pts: Vec<Point> = (0..50).map(|_| Point::new(rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0))).collect();
        let b = bounding_box(pts.iter().copied()).unwrap();
        let mut lo = (f64::INFINITY, f64::INFINITY);
        let mut hi = (f64::NEG_INFINITY, f64::NEG_INFINITY);
        for p in &pts {
            if p.x < lo.0 { lo.0 = p.x; }
            if p.y < lo.1 { lo.1 = p.y; }
            if p.x > hi.0 { hi.0 = p.x; }
            if p.y > hi.1 { hi.1 = p.y; }
        }
        assert_eq!((b.min_x, b.min_y, b.max_x, b.max_y), (lo.0, lo.1, hi.0, hi.1));
    }
}

#[test]
fn plan_tracks_mirror_match_partition() {
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    for _ in 0..200 {
        let src = random_view(&mut rng, "s", 30, 0.7, 0.15);
        let tgt = random_view(&mut rng, "t", 30, 0.7, 0.15);
        let src_layout = random_layout(&mut rng, &src);
        let tgt_layout = random_layout(&mut rng, &tgt);
        let sel = random_selection(&mut rng, &src, &src_layout);
        let m = classify_drop(&sel, &tgt);
        let released = translate_selection(&sel, Vector::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        let plan = plan_animation(&m, &released, &tgt_layout, &community_palette(&src), &community_palette(&tgt), "s", 500)
            .unwrap();

        let keys_with = |role: Role| -> Vec<&NodeId> {
            plan.node_tracks.iter().filter(|(_, t)| t.role == role).map(|(k, _)| k).collect()
        };
        assert!(keys_with(Role::Matched).into_iter().eq(m.matched_nodes.iter()));
        assert!(keys_with(Role::Faded).into_iter().eq(m.faded_nodes.iter()));
        assert!(plan.color_tracks.keys().eq(m.matched_nodes.iter()));
        let edges_with = |role: Role| -> Vec<&EdgeKey> {
            plan.edge_tracks.iter().filter(|(_, r)| **r == role).map(|(k, _)| k).collect()
        };
        assert!(edges_with(Role::Matched).into_iter().eq(m.matched_edges.iter()));
        assert!(edges_with(Role::Faded).into_iter().eq(m.faded_edges.iter()));
        assert_eq!(plan.grayed_nodes, m.grayed_nodes);
        assert_eq!(plan.grayed_edges, m.grayed_edges);
        for (id, t) in &plan.node_tracks {
            match t.role {
                Role::Matched => assert_eq!(Some(t.end), tgt_layout.position(id)),
                Role::Faded => assert_eq!(t.start, t.end),
            }
        }
    }
}

fn fixed_plan(seed: u64) -> graphbridge_core::animation::InterpolationPlan {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let src = random_view(&mut rng, "s", 20, 0.8, 0.2);
    let tgt = random_view(&mut rng, "t", 20, 0.8, 0.2);
    let src_layout = random_layout(&mut rng, &src);
    let tgt_layout = random_layout(&mut rng, &tgt);
    let sel = random_selection(&mut rng, &src, &src_layout);
    let m = classify_drop(&sel, &tgt);
    let released = translate_selection(&sel, Vector::new(0.7, -0.2));
    let palette = |v: &ViewGraph, base: u8| v.node_ids.iter().map(|n| (n.clone(), Rgb(base, 255 - base, 17))).collect();
    plan_animation(&m, &released, &tgt_layout, &palette(&src, 10), &palette(&tgt, 200), "s", 800).unwrap()
}

proptest! {
    #[test]
    fn matched_motion_is_straight_and_monotone(seed in 0u64..50, a in 0.0f64..=1.0, b in 0.0f64..=1.0) {
        let plan = fixed_plan(seed);
        let (t1, t2) = if a <= b { (a, b) } else { (b, a) };
        let f1 = sample(&plan, t1).unwrap();
        let f2 = sample(&plan, t2).unwrap();
        for (id, track) in &plan.node_tracks {
            if track.role != Role::Matched { continue; }
            let (s, e) = (track.start, track.end);
            let d1 = f1.nodes[id].position.offset_from(s);
            let d2 = f2.nodes[id].position.offset_from(s);
            let dist = |v: Vector| (v.dx * v.dx + v.dy * v.dy).sqrt();
            prop_assert!(dist(d1) <= dist(d2) + 1e-15);
            // collinear with the segment and within its extent
            let seg = e.offset_from(s);
            let cross = seg.dx * d2.dy - seg.dy * d2.dx;
            prop_assert!(cross.abs() < 1e-12);
            prop_assert!(dist(d2) <= dist(seg) + 1e-12);
        }
    }

    #[test]
    fn sampling_is_stateless(seed in 0u64..50, t in 0.0f64..=1.0, back in 0.0f64..=1.0) {
        let plan = fixed_plan(seed);
        let first = sample(&plan, t).unwrap();
        let _ = sample(&plan, t * back).unwrap();
        prop_assert_eq!(sample(&plan, t).unwrap(), first);
    }

    #[test]
    fn alphas_stay_in_unit_interval(seed in 0u64..50, t in 0.0f64..=1.0) {
        let frame = sample(&fixed_plan(seed), t).unwrap();
        prop_assert!(frame.nodes.values().all(|n| (0.0..=1.0).contains(&n.alpha) && n.position.is_finite()));
        prop_assert!(frame.edges.values().all(|a| (0.0..=1.0).contains(a)));
    }

    #[test]
    fn scrub_ignores_perpendicular_motion(
        sx in -1e3f64..1e3, sy in -1e3f64..1e3, tx in -1e3f64..1e3, ty in -1e3f64..1e3,
        along in -0.5f64..1.5, off in -500.0f64..500.0,
    ) {
        let s = Point::new(sx, sy);
        let t = Point::new(tx, ty);
        prop_assume!((tx - sx).abs() + (ty - sy).abs() > 1.0);
        let axis = t.offset_from(s);
        let on_line = Point::new(sx + along * axis.dx, sy + along * axis.dy);
        let len = axis.dot(axis).sqrt();
        let normal = Vector::new(-axis.dy / len, axis.dx / len);
        let moved = Point::new(on_line.x + off * normal.dx, on_line.y + off * normal.dy);
        let p0 = scrub_progress(on_line, s, t).unwrap();
        let p1 = scrub_progress(moved, s, t).unwrap();
        prop_assert!((p0 - p1).abs() < 1e-12, "{p0} vs {p1}");
        prop_assert!((0.0..=1.0).contains(&p1));
    }

    #[test]
    fn translation_is_rigid(seed in 0u64..200, dx in -3.0f64..3.0, dy in -3.0f64..3.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let v = random_view(&mut rng, "v", 15, 0.9, 0.2);
        let l = random_layout(&mut rng, &v);
        let sel = random_selection(&mut rng, &v, &l);
        let moved = translate_selection(&sel, Vector::new(dx, dy));
        let grab = sel.grab_positions();
        for (u, pu) in &moved {
            for (w, pw) in &moved {
                prop_assert_eq!(pu.offset_from(*pw), grab[u].offset_from(grab[w]));
            }
        }
    }
}

//! Property tests for the structural invariants: interval merging, node
//! relabeling, dyadic builders, and formatting-independent numerics.

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use dyadnet_core::builders::{asymmetric_matrix, mutual_matrix, product_matrix, symmetrize_or};
use dyadnet_core::contacts::{merge_events, ContactEvent, GapPolicy};
use dyadnet_core::perm::{grouped_permutation, relabel, NodePermutation};
use dyadnet_core::selection::{selection_cell, SelectionCoefficients};
use dyadnet_core::terms::TermExpr;
use dyadnet_core::{DyadicMatrix, NodeId, NominationNetwork, Roster, SampleId};

fn roster(nodes_per_sample: &[usize]) -> Roster {
    let mut r = Roster::new();
    for (s, &count) in nodes_per_sample.iter().enumerate() {
        for k in 0..count {
            r.insert(
                NodeId::new(format!("s{s}n{k}")),
                SampleId::new(format!("s{s}")),
            )
            .unwrap();
        }
    }
    r
}

// --- interval merging -----------------------------------------------------

fn event_stream() -> impl Strategy<Value = Vec<ContactEvent>> {
    // Up to 24 fragments on up to 3 dyads of a 4-node sample, timestamps
    // small enough to collide and overlap often.
    let frag = (0u8..3, 0u64..240, 1u64..40).prop_map(|(dyad, start, len)| {
        let (a, b) = [("a", "b"), ("a", "c"), ("b", "d")][dyad as usize];
        ContactEvent::new(
            SampleId::new("one"),
            NodeId::new(a),
            NodeId::new(b),
            start,
            start + len,
        )
        .unwrap()
    });
    proptest::collection::vec(frag, 1..24)
}

fn merge_key(events: &[ContactEvent], gap: u64) -> Vec<(String, String, u64, u64, u64, u32)> {
    let mut out: Vec<_> = merge_events(events, gap)
        .into_iter()
        .map(|m| {
            (
                m.span.a().to_string(),
                m.span.b().to_string(),
                m.span.start(),
                m.span.end(),
                m.covered,
                m.merged_from,
            )
        })
        .collect();
    out.sort();
    out
}

proptest! {
    #[test]
    fn merging_is_order_invariant(events in event_stream(), gap in 0u64..120, seed: u64) {
        let mut shuffled = events.clone();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for i in (1..shuffled.len()).rev() {
            let j = rand::Rng::random_range(&mut rng, 0..=i);
            shuffled.swap(i, j);
        }
        prop_assert_eq!(merge_key(&events, gap), merge_key(&shuffled, gap));
    }

    #[test]
    fn merging_is_idempotent(events in event_stream(), gap in 0u64..120) {
        let first = merge_events(&events, gap);
        let spans: Vec<ContactEvent> = first.iter().map(|m| m.span.clone()).collect();
        let second = merge_events(&spans, gap);
        prop_assert_eq!(first.len(), second.len());
        for (a, b) in first.iter().zip(&second) {
            prop_assert_eq!(&a.span, &b.span);
            // Re-merging fuses nothing further, so every merged event stays
            // a single contiguous span.
            prop_assert_eq!(b.merged_from, 1);
            prop_assert_eq!(b.covered, b.span.duration());
        }
    }

    #[test]
    fn covered_never_exceeds_span(events in event_stream(), gap in 0u64..120) {
        for m in merge_events(&events, gap) {
            prop_assert!(m.duration(GapPolicy::Covered) <= m.duration(GapPolicy::Span));
            prop_assert!(m.covered >= 1);
        }
    }
}

// --- node relabeling --------------------------------------------------------

fn sorted(mut v: Vec<u64>) -> Vec<u64> {
    v.sort_unstable();
    v
}

/// Unmasked cell values of the upper triangle, as orderable bit patterns.
fn value_multiset(m: &DyadicMatrix) -> Vec<u64> {
    sorted(
        m.unmasked_dyads()
            .map(|(i, j)| m.get(i, j).unwrap().to_bits())
            .collect(),
    )
}

fn row_sum_multiset(m: &DyadicMatrix) -> Vec<u64> {
    sorted(
        (0..m.n())
            .map(|i| {
                // Sum in sorted order so equal value multisets give
                // bit-identical sums regardless of column order.
                let mut row: Vec<f64> = (0..m.n()).filter_map(|j| m.get(i, j)).collect();
                row.sort_by(f64::total_cmp);
                row.iter().sum::<f64>().to_bits()
            })
            .collect(),
    )
}

fn masked_degree_multiset(m: &DyadicMatrix) -> Vec<u64> {
    sorted(
        (0..m.n())
            .map(|i| {
                (0..m.n())
                    .filter(|&j| j != i && m.is_masked(i, j))
                    .count() as u64
            })
            .collect(),
    )
}

proptest! {
    #[test]
    fn relabeling_preserves_multisets_symmetry_and_masks(
        sizes in (2usize..7, 2usize..7),
        cells in proptest::collection::vec((0.0f64..10.0, prop::bool::weighted(0.2)), 100),
        seed: u64,
    ) {
        let r = roster(&[sizes.0, sizes.1]);
        let n = r.len();
        let mut m = DyadicMatrix::zeros(n, "y");
        let mut k = 0;
        for i in 0..n {
            for j in i + 1..n {
                let (v, mask) = cells[k % cells.len()];
                if mask {
                    m.mask(i, j);
                } else {
                    m.set(i, j, v);
                }
                k += 1;
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = grouped_permutation(&r.groups(), n, &mut rng).unwrap();
        let out = relabel(&m, &p).unwrap();

        prop_assert!(out.is_symmetric());
        prop_assert_eq!(value_multiset(&out), value_multiset(&m));
        prop_assert_eq!(row_sum_multiset(&out), row_sum_multiset(&m));
        prop_assert_eq!(masked_degree_multiset(&out), masked_degree_multiset(&m));

        // Grouped permutations never move a node across samples.
        for i in 0..n {
            prop_assert_eq!(r.sample(i), r.sample(p.map(i)));
        }
    }

    #[test]
    fn relabeling_composes_with_identity(n in 2usize..9) {
        let mut m = DyadicMatrix::zeros(n, "y");
        for i in 0..n {
            for j in i + 1..n {
                m.set(i, j, (i * 31 + j) as f64);
            }
        }
        let identity = NodePermutation::identity(n);
        prop_assert_eq!(relabel(&m, &identity).unwrap(), m);
    }
}

// --- dyadic builders ----------------------------------------------------------

proptest! {
    #[test]
    fn mutual_plus_asymmetric_equals_any_tie(
        ties in proptest::collection::vec((0usize..6, 0usize..6), 0..12),
        respondents in proptest::collection::vec(prop::bool::weighted(0.8), 6),
    ) {
        let mut net = NominationNetwork::new(6, "f");
        for (i, &resp) in respondents.iter().enumerate() {
            if resp {
                net.mark_respondent(i);
            }
        }
        for &(ego, alter) in &ties {
            if ego != alter && net.is_respondent(ego) {
                net.add_nomination(ego, alter).unwrap();
            }
        }
        let any = symmetrize_or(&net);
        let mutual = mutual_matrix(&net);
        let asym = asymmetric_matrix(&net);
        for i in 0..6 {
            for j in i + 1..6 {
                let (m, a, o) = (mutual.get(i, j), asym.get(i, j), any.get(i, j));
                if let (Some(m), Some(a), Some(o)) = (m, a, o) {
                    prop_assert_eq!(m + a, o);
                }
                // A positive split tie implies a positive combined tie.
                if m == Some(1.0) || a == Some(1.0) {
                    prop_assert_eq!(o, Some(1.0));
                }
                // The asymmetric rule needs both directions observed, which
                // also settles the combined cell; an observed "no" can settle
                // mutual to 0 while the combined cell stays undefined.
                if o.is_none() {
                    prop_assert_eq!(a, None);
                    prop_assert!(m != Some(1.0));
                }
            }
        }
    }

    #[test]
    fn product_of_matrices_commutes(
        cells in proptest::collection::vec(
            ((0.0f64..3.0, prop::bool::weighted(0.15)), (0.0f64..3.0, prop::bool::weighted(0.15))),
            10,
        ),
    ) {
        let n = 5;
        let mut a = DyadicMatrix::zeros(n, "a");
        let mut b = DyadicMatrix::zeros(n, "b");
        let mut k = 0;
        for i in 0..n {
            for j in i + 1..n {
                let ((va, ma), (vb, mb)) = cells[k];
                if ma { a.mask(i, j) } else { a.set(i, j, va) }
                if mb { b.mask(i, j) } else { b.set(i, j, vb) }
                k += 1;
            }
        }
        let ab = product_matrix(&a, &b).unwrap();
        let ba = product_matrix(&b, &a).unwrap();
        for i in 0..n {
            for j in i + 1..n {
                prop_assert_eq!(ab.get(i, j), ba.get(i, j));
                prop_assert_eq!(ab.is_masked(i, j), ba.is_masked(i, j));
            }
        }
    }

    #[test]
    fn selection_surface_is_symmetric_in_the_pair(
        vi in 0.0f64..40.0,
        vj in 0.0f64..40.0,
    ) {
        let c = SelectionCoefficients {
            intercept: 2.504,
            mean: -0.059,
            similarity: 0.047,
            interaction: -0.004,
        };
        let a = selection_cell(vi, vj, &c).unwrap();
        let b = selection_cell(vj, vi, &c).unwrap();
        prop_assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0));
    }
}

// --- term expressions -------------------------------------------------------

fn term_expr() -> impl Strategy<Value = String> {
    let attr = prop::sample::select(vec!["age", "depression", "trait_a"]);
    let level = prop::sample::select(vec!["gender=female", "org=member", "status=bachelor"]);
    let net = prop::sample::select(vec!["friendship"]);
    let base = prop_oneof![
        attr.clone().prop_map(|a| format!("mean({a})")),
        attr.clone().prop_map(|a| format!("centered_mean({a})")),
        attr.prop_map(|a| format!("similarity({a})")),
        level.clone().prop_map(|l| format!("any({l})")),
        level.clone().prop_map(|l| format!("both({l})")),
        level.clone().prop_map(|l| format!("one({l})")),
        prop::sample::select(vec!["status", "org"]).prop_map(|a| format!("same({a})")),
        net.clone().prop_map(|n| format!("or({n})")),
        net.clone().prop_map(|n| format!("mutual({n})")),
        net.prop_map(|n| format!("asymmetric({n})")),
        Just("sample(two)".to_string()),
    ];
    prop_oneof![
        base.clone(),
        (base.clone(), base).prop_map(|(a, b)| format!("product({a},{b})")),
    ]
}

proptest! {
    #[test]
    fn term_parsing_round_trips_through_display(text in term_expr()) {
        let parsed: TermExpr = text.parse().unwrap();
        prop_assert_eq!(parsed.to_string(), text.clone());
        let reparsed: TermExpr = parsed.to_string().parse().unwrap();
        prop_assert_eq!(reparsed, parsed);
    }

    #[test]
    fn term_parsing_survives_whitespace(text in term_expr()) {
        let spaced = text.replace('(', " ( ").replace(')', " ) ").replace(',', " , ");
        let a: TermExpr = text.parse().unwrap();
        let b: TermExpr = spaced.parse().unwrap();
        prop_assert_eq!(a, b);
    }
}

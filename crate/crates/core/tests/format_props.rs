use proptest::prelude::*;

use gridex::engine::parse_trace_csv;
use gridex::format::parse_instance_str;
use gridex::grid::MAX_WEIGHT;
use gridex::{parse_instance, run_on, serialize_instance, GridSpec, Greedy, Instance, Orientation, Vertex};

/// Arbitrary weights and orientations; reachability is not required.
fn arb_instance() -> impl proptest::strategy::Strategy<Value = Instance> {
    (1u32..=5, 1u32..=6, any::<bool>(), proptest::option::of(1u64..=MAX_WEIGHT))
        .prop_flat_map(|(r, c, directed, k)| {
            let spec = GridSpec::new(r, c, directed).unwrap();
            let e = spec.edge_count();
            (
                Just((spec, k)),
                proptest::collection::vec(1u64..=MAX_WEIGHT, e),
                proptest::collection::vec(any::<bool>(), e),
                (1..=r, 1..=c),
            )
        })
        .prop_map(|((spec, k), weights, flips, (sr, sc))| Instance {
            spec,
            weights,
            orientation: spec.directed.then(|| {
                flips
                    .iter()
                    .map(|f| if *f { Orientation::Backward } else { Orientation::Forward })
                    .collect()
            }),
            start: Vertex::new(sr, sc),
            k,
        })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 500, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn instance_round_trips(inst in arb_instance()) {
        let text = serialize_instance(&inst);
        prop_assert_eq!(parse_instance(text.as_bytes()).unwrap(), inst.clone());
        prop_assert_eq!(serialize_instance(&parse_instance_str(&text).unwrap()), text);
    }

    #[test]
    fn dropping_an_edge_line_is_rejected(inst in arb_instance(), pick in any::<usize>()) {
        let text = serialize_instance(&inst);
        let edges: Vec<usize> = text.lines().enumerate().filter(|(_, l)| l.starts_with("edge")).map(|(i, _)| i).collect();
        prop_assume!(!edges.is_empty());
        let drop = edges[pick % edges.len()];
        let cut: String = text.lines().enumerate().filter(|(i, _)| *i != drop).map(|(_, l)| format!("{l}\n")).collect();
        prop_assert!(parse_instance(cut.as_bytes()).is_err());
    }

    #[test]
    fn oversized_weights_are_rejected(inst in arb_instance(), extra in 1u64..=u64::MAX - MAX_WEIGHT) {
        prop_assume!(inst.spec.edge_count() > 0);
        let text = serialize_instance(&inst);
        let bumped: String = text
            .lines()
            .map(|l| {
                if l.starts_with("edge") {
                    let (head, _) = l.rsplit_once(' ').unwrap();
                    format!("{head} {}\n", MAX_WEIGHT + extra)
                } else {
                    format!("{l}\n")
                }
            })
            .collect();
        prop_assert!(parse_instance(bumped.as_bytes()).is_err());
    }

    #[test]
    fn parser_never_panics(bytes in proptest::collection::vec(any::<u8>(), 0..400)) {
        let _ = parse_instance(&bytes);
        let _ = parse_trace_csv(&bytes);
    }

    #[test]
    fn trace_csv_round_trips_and_detects_tampering(inst in arb_instance(), pick in any::<usize>()) {
        prop_assume!(!inst.spec.directed);
        let out = run_on(&inst, &mut Greedy).unwrap();
        let csv = out.trace.to_csv_string();
        let steps = parse_trace_csv(csv.as_bytes()).unwrap();
        prop_assert_eq!(&steps, &out.trace.steps);
        prop_assume!(!steps.is_empty());
        // Bump one cumulative cost.
        let lines: Vec<&str> = csv.lines().collect();
        let row = 1 + pick % steps.len();
        let mut fields: Vec<String> = lines[row].split(',').map(str::to_string).collect();
        let cum: u64 = fields[6].parse().unwrap();
        fields[6] = (cum + 1).to_string();
        let mut tampered: Vec<String> = lines.iter().map(|l| l.to_string()).collect();
        tampered[row] = fields.join(",");
        prop_assert!(parse_trace_csv(tampered.join("\n").as_bytes()).is_err());
    }
}

use proptest::prelude::*;
use qalg::format::{
    parse_circuit, parse_graph, parse_grid, parse_pauli_sum, parse_truth_table, write_circuit, write_graph, write_grid,
    write_pauli_sum, write_truth_table,
};
use qalg_core::oracles::TruthTable;
use qalg_core::pauli::PauliSum;
use qalg_core::variational::WeightedGraph;
use qalg_core::{Circuit, Control, Gate, C64};

fn gate() -> impl Strategy<Value = Gate> {
    let angle = -10.0f64..10.0;
    prop_oneof![
        Just(Gate::X),
        Just(Gate::Y),
        Just(Gate::Z),
        Just(Gate::H),
        Just(Gate::S),
        Just(Gate::T),
        angle.clone().prop_map(Gate::P),
        angle.clone().prop_map(Gate::Rx),
        angle.clone().prop_map(Gate::Ry),
        angle.prop_map(Gate::Rz),
    ]
}

fn circuit() -> impl Strategy<Value = Circuit> {
    (2usize..6).prop_flat_map(|n| {
        prop::collection::vec((gate(), 0..n, prop::collection::vec((0..n, any::<bool>()), 0..3)), 0..12).prop_map(
            move |ops| {
                let mut c = Circuit::new(n);
                for (g, t, ctrls) in ops {
                    let mut controls: Vec<Control> = Vec::new();
                    for (q, pos) in ctrls {
                        if q != t && controls.iter().all(|c| c.qubit != q) {
                            controls.push(Control::on(q, pos));
                        }
                    }
                    c.push(g, &[t], &controls);
                }
                c
            },
        )
    })
}

proptest! {
    #[test]
    fn circuits_round_trip(c in circuit()) {
        let text = write_circuit(&c).unwrap();
        let back = parse_circuit(&text).unwrap();
        prop_assert_eq!(back.unitary_matrix().unwrap(), c.unitary_matrix().unwrap());
        prop_assert_eq!(write_circuit(&back).unwrap(), text);
    }

    #[test]
    fn pauli_sums_round_trip(
        n in 1usize..5,
        offset in -3.0f64..3.0,
        terms in prop::collection::vec((-3.0f64..3.0, prop::collection::vec(0u8..4, 4)), 0..6),
    ) {
        let mut h = PauliSum::new(n);
        h.add_offset(C64::new(offset, 0.0));
        for (c, letters) in terms {
            let s: String = letters[..n].iter().map(|&k| ['I', 'X', 'Y', 'Z'][k as usize]).collect();
            h.add_term(C64::new(c, 0.0), qalg_core::pauli::PauliString::parse(&s).unwrap()).unwrap();
        }
        let back = parse_pauli_sum(&write_pauli_sum(&h).unwrap()).unwrap();
        prop_assert!(back.matrix().max_diff(&h.matrix()) < 1e-12);
    }

    #[test]
    fn truth_tables_round_trip(n_in in 1usize..5, n_out in 1usize..4, seed in any::<u64>()) {
        let rows: Vec<usize> = (0..1usize << n_in).map(|x| (seed.rotate_left(x as u32) as usize) % (1 << n_out)).collect();
        let t = TruthTable::new(n_in, n_out, rows).unwrap();
        prop_assert_eq!(parse_truth_table(&write_truth_table(&t)).unwrap(), t);
    }

    #[test]
    fn grids_round_trip(rows in prop::collection::vec(prop::collection::vec(-1e3f64..1e3, 3), 1..5)) {
        prop_assert_eq!(parse_grid(&write_grid(&rows)).unwrap(), rows);
    }

    #[test]
    fn graphs_round_trip(n in 2usize..7, weights in prop::collection::vec(0.0f64..5.0, 21)) {
        let mut g = WeightedGraph::new(n);
        let mut k = 0;
        for i in 0..n {
            for j in i + 1..n {
                if weights[k] > 1.0 {
                    g.add_edge(i, j, weights[k]).unwrap();
                }
                k += 1;
            }
        }
        prop_assert_eq!(parse_graph(&write_graph(&g)).unwrap(), g);
    }
}

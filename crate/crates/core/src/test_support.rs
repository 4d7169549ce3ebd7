use std::sync::Arc;

use num_rational::Ratio;

use crate::boundary::*;

pub(crate) fn act(s: &str) -> Action {
    parse_action(s).unwrap()
}

fn sym(s: &str) -> Sym {
    Arc::from(s)
}

fn chord(id: &str, start: &str, end: &str, action: i128, grading: i64) -> ReebChord {
    ReebChord { id: sym(id), start: sym(start), end: sym(end), action: Ratio::from_integer(action), grading }
}

fn two_piece(chords: Vec<ReebChord>) -> Arc<BoundaryData> {
    Arc::new(
        BoundaryData::new(BoundarySpec {
            pieces: vec![sym("P1"), sym("P2")],
            components: vec![
                LagrangianComponent { id: sym("C1"), piece: sym("P1") },
                LagrangianComponent { id: sym("C2"), piece: sym("P2") },
            ],
            chords,
            min_action: None,
        })
        .unwrap(),
    )
}

pub(crate) fn twist1_boundary() -> Arc<BoundaryData> {
    two_piece(vec![chord("a", "C1", "C2", 3, 1), chord("b", "C1", "C2", 1, 0)])
}

pub(crate) fn twist1_ends() -> Ends {
    Ends::cylinder(twist1_boundary())
}

pub(crate) fn twist1_reversed_b_ends() -> Ends {
    Ends::cylinder(two_piece(vec![chord("a", "C1", "C2", 3, 1), chord("b", "C2", "C1", 1, 0)]))
}

/// One piece with three components; `[c+ d- e-]` and `[f+ c-]` are disks.
pub(crate) fn pure_ends() -> Ends {
    let b = BoundaryData::new(BoundarySpec {
        pieces: vec![sym("P1")],
        components: vec![
            LagrangianComponent { id: sym("C1"), piece: sym("P1") },
            LagrangianComponent { id: sym("C2"), piece: sym("P1") },
            LagrangianComponent { id: sym("C3"), piece: sym("P1") },
        ],
        chords: vec![
            chord("c", "C1", "C2", 5, 2),
            chord("d", "C3", "C2", 1, 0),
            chord("e", "C1", "C3", 2, 0),
            chord("f", "C1", "C2", 7, 3),
        ],
        min_action: None,
    })
    .unwrap();
    Ends::cylinder(Arc::new(b))
}

//! Named fans used throughout the tests and documentation.

use crate::fan::Fan;

fn build(dim: usize, rays: &[&[i64]], cones: &[&[usize]]) -> Fan {
    Fan::new(
        dim,
        rays.iter().map(|r| r.to_vec()).collect(),
        cones.iter().map(|c| c.to_vec()).collect(),
    )
    .expect("fixture fans are valid")
}

/// `P¹`: rays `(1)`, `(-1)`.
pub fn p1() -> Fan {
    build(1, &[&[1], &[-1]], &[&[0], &[1]])
}

/// `P²`: rays `(1,0)`, `(0,1)`, `(-1,-1)`.
pub fn p2() -> Fan {
    build(2, &[&[1, 0], &[0, 1], &[-1, -1]], &[&[0, 1], &[1, 2], &[2, 0]])
}

/// `P¹×P¹`: rays `(1,0)`, `(-1,0)`, `(0,1)`, `(0,-1)` with the four quadrants.
pub fn p1xp1() -> Fan {
    build(
        2,
        &[&[1, 0], &[-1, 0], &[0, 1], &[0, -1]],
        &[&[0, 2], &[2, 1], &[1, 3], &[3, 0]],
    )
}

/// `F₁ = Bl₁P²`: the rays of `P²` plus the exceptional ray `(1,1)` (index 3).
pub fn f1() -> Fan {
    build(
        2,
        &[&[1, 0], &[0, 1], &[-1, -1], &[1, 1]],
        &[&[0, 3], &[3, 1], &[1, 2], &[2, 0]],
    )
}

/// Weighted projective plane `P(1,1,2)`: rays `(1,0)`, `(0,1)`, `(-1,-2)`.
/// The cone on rays 0 and 2 has multiplicity 2.
pub fn p112() -> Fan {
    build(2, &[&[1, 0], &[0, 1], &[-1, -2]], &[&[0, 1], &[1, 2], &[2, 0]])
}

/// `P²` blown up at two torus-fixed points: extra rays `(1,1)` and `(-1,0)`.
pub fn bl2_p2() -> Fan {
    build(
        2,
        &[&[1, 0], &[0, 1], &[-1, -1], &[1, 1], &[-1, 0]],
        &[&[0, 3], &[3, 1], &[1, 4], &[4, 2], &[2, 0]],
    )
}

/// `P²` blown up at the three torus-fixed points (the hexagon fan).
pub fn bl3_p2() -> Fan {
    build(
        2,
        &[&[1, 0], &[0, 1], &[-1, -1], &[1, 1], &[-1, 0], &[0, -1]],
        &[&[0, 3], &[3, 1], &[1, 4], &[4, 2], &[2, 5], &[5, 0]],
    )
}

/// `P¹×P¹×P¹`: rays `±e_i` (order `+e1,-e1,+e2,-e2,+e3,-e3`), eight octants.
pub fn p1xp1xp1() -> Fan {
    let mut cones: Vec<Vec<usize>> = Vec::new();
    for a in [0, 1] {
        for b in [2, 3] {
            for c in [4, 5] {
                cones.push(vec![a, b, c]);
            }
        }
    }
    Fan::new(
        3,
        vec![
            vec![1, 0, 0],
            vec![-1, 0, 0],
            vec![0, 1, 0],
            vec![0, -1, 0],
            vec![0, 0, 1],
            vec![0, 0, -1],
        ],
        cones,
    )
    .expect("fixture fans are valid")
}

/// `P³`: rays `e1, e2, e3, -(e1+e2+e3)`.
pub fn p3() -> Fan {
    build(
        3,
        &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[-1, -1, -1]],
        &[&[0, 1, 2], &[0, 1, 3], &[0, 2, 3], &[1, 2, 3]],
    )
}

/// A single non-simplicial cone over a square:
/// rays `(1,0,1)`, `(0,1,1)`, `(-1,0,1)`, `(0,-1,1)`.
pub fn square_cone() -> Fan {
    build(
        3,
        &[&[1, 0, 1], &[0, 1, 1], &[-1, 0, 1], &[0, -1, 1]],
        &[&[0, 1, 2, 3]],
    )
}

/// Complete non-simplicial fan over the faces of the cube `[-1,1]³`.
pub fn cube_fan() -> Fan {
    let mut rays = Vec::new();
    for x in [1, -1] {
        for y in [1, -1] {
            for z in [1, -1] {
                rays.push(vec![x, y, z]);
            }
        }
    }
    let mut cones = Vec::new();
    for axis in 0..3 {
        for sign in [1, -1] {
            cones.push(
                rays.iter()
                    .enumerate()
                    .filter(|(_, r)| r[axis] == sign)
                    .map(|(i, _)| i)
                    .collect(),
            );
        }
    }
    Fan::new(3, rays, cones).expect("fixture fans are valid")
}

/// The named fixtures with their names.
pub fn all() -> Vec<(&'static str, Fan)> {
    vec![
        ("P1", p1()),
        ("P2", p2()),
        ("P1xP1", p1xp1()),
        ("F1", f1()),
        ("P112", p112()),
        ("Bl2P2", bl2_p2()),
        ("Bl3P2", bl3_p2()),
        ("P1xP1xP1", p1xp1xp1()),
        ("P3", p3()),
        ("SquareCone", square_cone()),
        ("CubeFan", cube_fan()),
    ]
}

use cubesplit::cubesplit::{Constellation, conjectured_mindist, inverse_map};
use cubesplit::grassmann::{chordal_distance, distance_spectrum};

fn main() {
    let c = Constellation::symmetric(2, 3).unwrap();
    let s = distance_spectrum(c.symbols()).unwrap();
    let (i, j) = s.min_pair;
    println!("min {} pair ({i},{j}) conjectured {}", s.min_distance, conjectured_mindist(2, 3));
    let li = inverse_map(c.params(), c.symbol(i)).unwrap();
    let lj = inverse_map(c.params(), c.symbol(j)).unwrap();
    println!("i: cell {} a {:?}", li.cell, li.a);
    println!("j: cell {} a {:?}", lj.cell, lj.a);
    // distance of the paper-conjectured pair: a=(7/16,1/16) vs (9/16,1/16), same cell
    use cubesplit::cubesplit::{encode, CubeSplitParams};
    let p = CubeSplitParams::symmetric(2, 3).unwrap();
    let x1 = encode(&p, 0, &[7.0/16.0, 1.0/16.0]);
    let x2 = encode(&p, 0, &[9.0/16.0, 1.0/16.0]);
    println!("conjectured-pair distance {}", chordal_distance(&x1, &x2));
    let x3 = encode(&p, 0, &[1.0/16.0, 7.0/16.0]);
    let x4 = encode(&p, 0, &[1.0/16.0, 9.0/16.0]);
    println!("swapped-pair distance {}", chordal_distance(&x3, &x4));
}

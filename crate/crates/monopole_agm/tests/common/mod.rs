#![allow(dead_code)]

use monopole_agm::hyperpoly::Linear;
use monopole_agm::quadrature::{line_integral, CutSheet, Endpoint, Leg, Lip, SheetedContour};
use monopole_agm::richelot::PairLabel;
use monopole_agm::C64;

pub const I: C64 = C64 { re: 0.0, im: 1.0 };

/// Oracle value of a real-model table entry: `S dx / y` with `y = −i·w`,
/// along the real axis on the upper side.
pub fn real_oracle(roots: [f64; 6], label: PairLabel, s: &Linear<f64>) -> C64 {
    let r = roots.map(C64::from);
    let sheet = CutSheet::new(r, [(0, 1), (2, 3), (4, 5)]).unwrap();
    let (i, j) = label.endpoints();
    let mut legs = Vec::new();
    for k in i..j {
        let lip = if k % 2 == 0 { Some(Lip::Left) } else { None };
        legs.push(Leg::Segment { from: Endpoint::Root(k), to: Endpoint::Root(k + 1), lip });
    }
    let w = line_integral(&SheetedContour { sheet, legs }, s, 1e-13).unwrap();
    I * w
}

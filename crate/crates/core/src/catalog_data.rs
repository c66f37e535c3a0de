//! Published matrices and ten-knot parameters, entry for entry. Angles
//! keep their printed rounding (3.1415926536 and so on).
#![allow(clippy::approx_constant)]

pub const K5: [[i64; 5]; 5] = [[0, 1, 1, 1, 1], [1, 0, 1, 1, 1], [1, 1, 0, 1, 1], [1, 1, 1, 0, 1], [1, 1, 1, 1, 0]];

pub const P250: [[i64; 7]; 7] = [
    [0, 1, 1, -1, -1, -1, 1],
    [1, 0, 1, 1, 1, -1, 1],
    [1, 1, 0, 1, 1, -1, 1],
    [-1, 1, 1, 0, 1, -1, -1],
    [-1, 1, 1, 1, 0, 1, 1],
    [-1, -1, -1, -1, 1, 0, 1],
    [1, 1, 1, -1, 1, 1, 0],
];

pub const R7: [[i64; 7]; 7] = [
    [0, 1, 1, 4, 1, 1, 4],
    [4, 0, 4, 4, 4, 4, 4],
    [0, 0, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, 0, 0, 0],
    [1, 1, 4, 4, 0, 1, 1],
    [1, 1, 1, 1, 4, 0, 4],
    [0, 0, 0, 0, 0, 0, 0],
];

pub const P7: [[i64; 7]; 7] = [
    [0, 1, 1, 1, 1, 1, 1],
    [1, 0, 1, 1, 1, -1, 1],
    [1, 1, 0, -1, -1, -1, 1],
    [1, 1, -1, 0, -1, 1, 1],
    [1, 1, -1, -1, 0, 1, -1],
    [1, -1, -1, 1, 1, 0, 1],
    [1, 1, 1, 1, -1, 1, 0],
];

pub const Q7: [[i64; 7]; 7] = [
    [6, 4, 0, 2, 0, 2, 4],
    [4, 6, 2, 0, -2, -2, 2],
    [0, 2, 6, -2, 0, 2, 2],
    [2, 0, -2, 6, -2, 2, 4],
    [0, -2, 0, -2, 6, 0, 0],
    [2, -2, 2, 2, 0, 6, 0],
    [4, 2, 2, 4, 0, 0, 6],
];

pub const M11: [[i64; 11]; 11] = [
    [0, 1, -1, 1, 1, -1, 1, -1, 1, -1, -1],
    [1, 0, 1, 1, -1, 1, -1, 1, 1, -1, -1],
    [-1, 1, 0, 1, 1, 1, -1, 1, -1, -1, -1],
    [1, 1, 1, 0, 1, 1, 1, -1, -1, -1, 1],
    [1, -1, 1, 1, 0, 1, 1, -1, -1, 1, -1],
    [-1, 1, 1, 1, 1, 0, 1, 1, 1, 1, 1],
    [1, -1, -1, 1, 1, 1, 0, 1, 1, 1, 1],
    [-1, 1, 1, -1, -1, 1, 1, 0, 1, 1, -1],
    [1, 1, -1, -1, -1, 1, 1, 1, 0, -1, 1],
    [-1, -1, -1, -1, 1, 1, 1, 1, -1, 0, -1],
    [-1, -1, -1, 1, -1, 1, 1, -1, 1, -1, 0],
];

pub const P1625: [[i64; 8]; 8] = [
    [0, -1, -1, -1, -1, 1, -1, -1],
    [-1, 0, -1, 1, 1, 1, -1, 1],
    [-1, -1, 0, -1, -1, -1, -1, 1],
    [-1, 1, -1, 0, -1, 1, 1, 1],
    [-1, 1, -1, -1, 0, -1, -1, -1],
    [1, 1, -1, 1, -1, 0, -1, 1],
    [-1, -1, -1, 1, -1, -1, 0, -1],
    [-1, 1, 1, 1, -1, 1, -1, 0],
];

pub const P1625_BLOCK: [[i64; 8]; 8] = [
    [0, -1, -1, -1, -1, -1, 1, -1],
    [-1, 0, -1, -1, -1, -1, -1, 1],
    [-1, -1, 0, -1, 1, -1, -1, -1],
    [-1, -1, -1, 0, -1, 1, -1, -1],
    [-1, -1, 1, -1, 0, 1, 1, 1],
    [-1, -1, -1, 1, 1, 0, 1, 1],
    [1, -1, -1, -1, 1, 1, 0, 1],
    [-1, 1, -1, -1, 1, 1, 1, 0],
];

pub const PM125: [[i64; 6]; 6] = [
    [0, -1, -1, -1, -1, 1],
    [-1, 0, -1, 1, -1, -1],
    [-1, -1, 0, -1, 1, -1],
    [-1, 1, -1, 0, 1, 1],
    [-1, -1, 1, 1, 0, 1],
    [1, -1, -1, 1, 1, 0],
];

pub const R6A: [[i64; 6]; 6] = [
    [0, 1, 1, 3, 3, 1],
    [0, 0, 0, 0, 0, 0],
    [3, 1, 0, 1, 1, 3],
    [0, 0, 0, 0, 0, 0],
    [1, 3, 3, 1, 0, 1],
    [0, 0, 0, 0, 0, 0],
];

pub const R6B: [[i64; 6]; 6] = [
    [0, 1, 3, 1, 1, 3],
    [3, 0, 1, 3, 1, 1],
    [1, 3, 0, 1, 3, 1],
    [1, 1, 3, 0, 1, 3],
    [3, 1, 1, 3, 0, 1],
    [1, 3, 1, 1, 3, 0],
];

pub const R8: [[i64; 8]; 8] = [
    [0, 0, 0, 0, 0, 0, 0, 0],
    [5, 0, 7, 7, 3, 5, 3, 3],
    [0, 0, 0, 0, 0, 0, 0, 0],
    [3, 3, 5, 0, 7, 7, 3, 5],
    [0, 0, 0, 0, 0, 0, 0, 0],
    [3, 5, 3, 3, 5, 0, 7, 7],
    [0, 0, 0, 0, 0, 0, 0, 0],
    [7, 7, 3, 5, 3, 3, 5, 0],
];

pub const P9: [[i64; 9]; 9] = [
    [0, -1, -1, -1, -1, -1, -1, -1, -1],
    [-1, 0, -1, -1, 1, -1, -1, 1, -1],
    [-1, -1, 0, 1, 1, -1, -1, -1, 1],
    [-1, -1, 1, 0, -1, -1, 1, -1, 1],
    [-1, 1, 1, -1, 0, -1, 1, 1, 1],
    [-1, -1, -1, -1, -1, 0, 1, -1, 1],
    [-1, -1, -1, 1, 1, 1, 0, -1, 1],
    [-1, 1, -1, -1, 1, -1, -1, 0, 1],
    [-1, -1, 1, 1, 1, 1, 1, 1, 0],
];

pub const R9: [[i64; 9]; 9] = [
    [0, 2, 2, 10, 2, 5, 5, 2, 2],
    [8, 0, 7, 8, 7, 8, 7, 8, 7],
    [0, 0, 0, 0, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, 0, 0, 0, 0, 0],
    [3, 3, 6, 3, 9, 9, 0, 3, 6],
    [4, 3, 12, 4, 3, 3, 3, 0, 4],
    [6, 6, 6, 10, 10, 5, 5, 6, 0],
];

pub const P10: [[i64; 10]; 10] = [
    [0, 1, 1, 1, 1, 1, -1, 1, 1, -1],
    [1, 0, 1, 1, 1, -1, -1, 1, -1, -1],
    [1, 1, 0, -1, -1, -1, -1, 1, -1, 1],
    [1, 1, -1, 0, -1, 1, -1, -1, -1, 1],
    [1, -1, -1, -1, 0, 1, 1, -1, 1, -1],
    [1, -1, -1, 1, 1, 0, -1, -1, -1, -1],
    [-1, -1, -1, -1, 1, -1, 0, 1, 1, 1],
    [1, 1, 1, -1, -1, -1, 1, 0, -1, -1],
    [1, -1, -1, -1, 1, -1, 1, -1, 0, -1],
    [-1, -1, 1, 1, -1, -1, 1, -1, -1, 0],
];

pub const R10: [[i64; 10]; 10] = [
    [0, 4, 4, 10, 6, 4, 14, 8, 4, 6],
    [7, 0, 11, 7, 9, 11, 9, 11, 7, 9],
    [0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
    [2, 2, 12, 6, 0, 2, 2, 2, 6, 2],
    [0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
    [4, 4, 6, 4, 4, 14, 10, 0, 8, 6],
    [9, 5, 5, 15, 5, 9, 5, 5, 0, 5],
    [8, 6, 14, 6, 12, 6, 8, 6, 6, 0],
];

/// Ten-knot axis parameters `(t, p, x, y, omega)`.
pub const TEN_KNOT_LINES: [[f64; 5]; 10] = [
    [0.0, 0.0, 0.0, 0.0, 3.1254845844],
    [0.8888266921, 4.8105113254, 1.718837714, -1.0154516939, 3.0137625571],
    [1.7307454079, 4.3698637441, 15.8387596901, 35.4191212761, 3.798746922],
    [0.6710427219, 2.1610133993, 0.4876982243, -4.7627389073, 2.9915865287],
    [1.9722582511, 3.3409580456, 6.3213598491, -0.9629547593, 2.460123252],
    [0.5053571239, 3.5602584953, 3.410770679, 0.0642137547, 3.1415926536],
    [2.0636231502, -0.0462841434, 4.9265275262, 3.7039199491, 3.1391795035],
    [2.7052117458, -0.3157789613, 2.3817940085, 0.3228529593, 3.1415926536],
    [2.3433579644, 4.2721078026, 0.3516109986, -2.2031892116, 1.4094265204],
    [1.1462686715, 3.7874981154, -1.7994972106, -3.0922913208, 1.9871990245],
];

/// Ten-knot semi-axes `(a, b)`.
pub const TEN_KNOT_AXES: [[f64; 2]; 10] = [
    [0.8756395562, 0.8756395562],
    [1.1107047384, 0.7276292249],
    [2.989157107, 1.4262671635],
    [1.8316025399, 1.3574498777],
    [1.8438264359, 0.8079920149],
    [0.8219266058, 0.4523138356],
    [3.0522525128, 3.0522524955],
    [0.2147737114, 0.1709326871],
    [0.3864418576, 0.010000001],
    [0.5582558938, 0.0100000003],
];

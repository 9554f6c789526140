//! Small fixed-size vector and matrix helpers.

use std::ops::{Add, Mul, Sub};

pub type Vec3 = [f64; 3];
pub type Mat3<T = f64> = [[T; 3]; 3];

pub fn sub(a: Vec3, b: Vec3) -> Vec3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

pub fn add(a: Vec3, b: Vec3) -> Vec3 {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

pub fn scale(a: Vec3, s: f64) -> Vec3 {
    [a[0] * s, a[1] * s, a[2] * s]
}

pub fn dot(a: Vec3, b: Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub fn norm(a: Vec3) -> f64 {
    dot(a, a).sqrt()
}

pub fn cross(a: Vec3, b: Vec3) -> Vec3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

pub fn mat_vec(m: &Mat3, v: Vec3) -> Vec3 {
    [dot(m[0], v), dot(m[1], v), dot(m[2], v)]
}

pub fn identity<T: From<f64> + Copy>() -> Mat3<T> {
    let one = T::from(1.0);
    let zero = T::from(0.0);
    [[one, zero, zero], [zero, one, zero], [zero, zero, one]]
}

pub fn transpose<T: Copy>(m: &Mat3<T>) -> Mat3<T> {
    let mut t = *m;
    for (i, row) in m.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            t[j][i] = v;
        }
    }
    t
}

pub fn mat_mul<T>(a: &Mat3<T>, b: &Mat3<T>) -> Mat3<T>
where
    T: Copy + Add<Output = T> + Mul<Output = T> + From<f64>,
{
    let mut c = [[T::from(0.0); 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let mut acc = T::from(0.0);
            for k in 0..3 {
                acc = acc + a[i][k] * b[k][j];
            }
            c[i][j] = acc;
        }
    }
    c
}

pub fn mat_sub<T>(a: &Mat3<T>, b: &Mat3<T>) -> Mat3<T>
where
    T: Copy + Sub<Output = T>,
{
    let mut c = *a;
    for i in 0..3 {
        for j in 0..3 {
            c[i][j] = a[i][j] - b[i][j];
        }
    }
    c
}

pub fn trace<T>(m: &Mat3<T>) -> T
where
    T: Copy + Add<Output = T>,
{
    m[0][0] + m[1][1] + m[2][2]
}

/// Rotation by `angle` about the unit `axis` (Rodrigues).
pub fn rotation(axis: Vec3, angle: f64) -> Mat3 {
    let n = scale(axis, 1.0 / norm(axis));
    let (s, c) = angle.sin_cos();
    let t = 1.0 - c;
    [
        [c + n[0] * n[0] * t, n[0] * n[1] * t - n[2] * s, n[0] * n[2] * t + n[1] * s],
        [n[1] * n[0] * t + n[2] * s, c + n[1] * n[1] * t, n[1] * n[2] * t - n[0] * s],
        [n[2] * n[0] * t - n[1] * s, n[2] * n[1] * t + n[0] * s, c + n[2] * n[2] * t],
    ]
}

/// Rotation taking the unit vector `from` onto the unit vector `to`.
pub fn rotation_between(from: Vec3, to: Vec3) -> Mat3 {
    let f = scale(from, 1.0 / norm(from));
    let t = scale(to, 1.0 / norm(to));
    let axis = cross(f, t);
    let s = norm(axis);
    let c = dot(f, t);
    if s < 1e-15 {
        if c > 0.0 {
            return identity();
        }
        // antiparallel: half turn about any perpendicular axis
        let helper = if f[0].abs() < 0.9 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
        return rotation(cross(f, helper), std::f64::consts::PI);
    }
    rotation(axis, s.atan2(c))
}

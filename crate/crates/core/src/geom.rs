//! Small fixed-dimension vector helpers over any [`Scalar`].

use std::fmt;

use crate::scalar::Scalar;

/// A point (or vector) in ℝ^d, d ≤ 3.
#[derive(Clone, Debug, PartialEq)]
pub struct Point<T>(pub Vec<T>);

impl<T: Scalar> Point<T> {
    pub fn new(coords: Vec<T>) -> Self {
        Point(coords)
    }

    pub fn origin(dim: usize) -> Self {
        Point(vec![T::zero(); dim])
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        Point(coords.iter().map(|&c| T::from_int(c)).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[T] {
        &self.0
    }

    pub fn add(&self, other: &Self) -> Self {
        Point(self.0.iter().zip(&other.0).map(|(a, b)| a.clone() + b.clone()).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        Point(self.0.iter().zip(&other.0).map(|(a, b)| a.clone() - b.clone()).collect())
    }

    pub fn neg(&self) -> Self {
        Point(self.0.iter().map(|a| -a.clone()).collect())
    }

    pub fn scale(&self, c: &T) -> Self {
        Point(self.0.iter().map(|a| a.clone() * c.clone()).collect())
    }

    pub fn half(&self) -> Self {
        Point(self.0.iter().map(Scalar::half).collect())
    }

    pub fn dot(&self, other: &Self) -> T {
        self.0
            .iter()
            .zip(&other.0)
            .fold(T::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
    }

    pub fn norm_sq(&self) -> T {
        self.dot(self)
    }

    pub fn dist_sq(&self, other: &Self) -> T {
        self.sub(other).norm_sq()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().lossy_f64().sqrt()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|c| c.is_zero())
    }

    pub fn key(&self) -> Vec<T::Key> {
        self.0.iter().map(Scalar::key).collect()
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.0.iter().map(Scalar::lossy_f64).collect()
    }

    pub fn cast<U: Scalar>(&self) -> Point<U> {
        Point(self.0.iter().map(|c| U::from_rational(&c.to_rational())).collect())
    }

    /// Lexicographic comparison, used for canonical ordering.
    pub fn lex_cmp(&self, other: &Self) -> std::cmp::Ordering {
        for (a, b) in self.0.iter().zip(&other.0) {
            match a.total_cmp(b) {
                std::cmp::Ordering::Equal => continue,
                ord => return ord,
            }
        }
        self.0.len().cmp(&other.0.len())
    }
}

impl<T: Scalar> fmt::Display for Point<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// z-component of the 2D cross product `(b - a) × (c - a)`.
pub fn orient2<T: Scalar>(a: &Point<T>, b: &Point<T>, c: &Point<T>) -> T {
    let (ax, ay) = (&a.0[0], &a.0[1]);
    (b.0[0].clone() - ax.clone()) * (c.0[1].clone() - ay.clone())
        - (b.0[1].clone() - ay.clone()) * (c.0[0].clone() - ax.clone())
}

pub fn cross3<T: Scalar>(u: &Point<T>, v: &Point<T>) -> Point<T> {
    let (a, b) = (&u.0, &v.0);
    Point(vec![
        a[1].clone() * b[2].clone() - a[2].clone() * b[1].clone(),
        a[2].clone() * b[0].clone() - a[0].clone() * b[2].clone(),
        a[0].clone() * b[1].clone() - a[1].clone() * b[0].clone(),
    ])
}

/// Signed volume (times 6) of the tetrahedron `abcd`.
pub fn orient3<T: Scalar>(a: &Point<T>, b: &Point<T>, c: &Point<T>, d: &Point<T>) -> T {
    cross3(&b.sub(a), &c.sub(a)).dot(&d.sub(a))
}

/// Squared distance from `p` to the closed segment `[a, b]`, exact for
/// exact scalars.
pub fn point_segment_dist_sq<T: Scalar>(p: &Point<T>, a: &Point<T>, b: &Point<T>) -> T {
    let ab = b.sub(a);
    let len_sq = ab.norm_sq();
    if len_sq.is_zero() {
        return p.dist_sq(a);
    }
    let t = p.sub(a).dot(&ab);
    if t <= T::zero() {
        p.dist_sq(a)
    } else if t >= len_sq {
        p.dist_sq(b)
    } else {
        let proj = a.add(&ab.scale(&(t / len_sq)));
        p.dist_sq(&proj)
    }
}

/// Squared distance from `p` to the closed triangle `abc` in ℝ³.
pub fn point_triangle_dist_sq<T: Scalar>(
    p: &Point<T>,
    a: &Point<T>,
    b: &Point<T>,
    c: &Point<T>,
) -> T {
    let n = cross3(&b.sub(a), &c.sub(a));
    let nn = n.norm_sq();
    if !nn.is_zero() {
        // Project onto the plane and test the barycentric signs.
        let off = p.sub(a).dot(&n);
        let proj = p.sub(&n.scale(&(off.clone() / nn.clone())));
        let s1 = cross3(&b.sub(a), &proj.sub(a)).dot(&n);
        let s2 = cross3(&c.sub(b), &proj.sub(b)).dot(&n);
        let s3 = cross3(&a.sub(c), &proj.sub(c)).dot(&n);
        let zero = T::zero();
        if s1 >= zero && s2 >= zero && s3 >= zero {
            return off.clone() * off / nn;
        }
    }
    point_segment_dist_sq(p, a, b)
        .min_of(point_segment_dist_sq(p, b, c))
        .min_of(point_segment_dist_sq(p, c, a))
}

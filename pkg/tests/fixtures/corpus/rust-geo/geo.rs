//! Plane geometry primitives.

/// A point on the integer grid.
pub struct Point {
    pub x: i64,
    pub y: i64,
}

impl Point {
    /// Create a point at the given coordinates.
    pub fn new(x: i64, y: i64) -> Point {
        Point { x, y }
    }

    /// Manhattan distance to another point.
    pub fn manhattan(&self, other: &Point) -> i64 {
        // absolute difference per axis
        (self.x - other.x).abs() + (self.y - other.y).abs()
    }
}

/// Clamp a coordinate into the closed range [lo, hi].
pub fn clamp(v: i64, lo: i64, hi: i64) -> i64 {
    v.max(lo).min(hi)
}

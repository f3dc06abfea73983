#include <vector>

/// Dense row-major matrix of doubles.
class Matrix {
public:
    /// Construct a rows-by-cols matrix filled with zeros.
    Matrix(int rows, int cols) : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

    /// Element access by row and column.
    double at(int r, int c) const {
        return data_[r * cols_ + c];
    }

    /// In-place scalar multiplication.
    void scale(double factor) {
        // touch every element exactly once
        for (auto &v : data_) {
            v *= factor;
        }
    }

private:
    int rows_;
    int cols_;
    std::vector<double> data_;
};

/// Trace of a square matrix.
double trace(const Matrix &m, int n) {
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        sum += m.at(i, i);
    }
    return sum;
}

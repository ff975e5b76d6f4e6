//! Safe wrapper over `matrixmultiply::dgemm` for strided row/column views.

/// A strided read-only matrix view into a flat buffer.
#[derive(Clone, Copy)]
pub(crate) struct View<'a> {
    pub data: &'a [f64],
    pub rows: usize,
    pub cols: usize,
    pub row_stride: usize,
    pub col_stride: usize,
}

impl<'a> View<'a> {
    pub fn new(data: &'a [f64], rows: usize, cols: usize, row_stride: usize, col_stride: usize) -> Self {
        let v = View {
            data,
            rows,
            cols,
            row_stride,
            col_stride,
        };
        assert!(v.last_index() < data.len(), "matrix view out of bounds");
        v
    }

    /// Same buffer, rows and columns swapped.
    pub fn t(self) -> Self {
        View {
            data: self.data,
            rows: self.cols,
            cols: self.rows,
            row_stride: self.col_stride,
            col_stride: self.row_stride,
        }
    }

    fn last_index(&self) -> usize {
        if self.rows == 0 || self.cols == 0 {
            0
        } else {
            (self.rows - 1) * self.row_stride + (self.cols - 1) * self.col_stride
        }
    }
}

/// `c = beta * c + a * b` where `c` is `a.rows x b.cols` with the given strides.
pub(crate) fn gemm(a: View<'_>, b: View<'_>, beta: f64, c: &mut [f64], c_row_stride: usize, c_col_stride: usize) {
    assert_eq!(a.cols, b.rows, "gemm inner dimension");
    let (m, k, n) = (a.rows, a.cols, b.cols);
    if m == 0 || n == 0 {
        return;
    }
    let last = (m - 1) * c_row_stride + (n - 1) * c_col_stride;
    assert!(last < c.len(), "gemm output out of bounds");
    // SAFETY: every index touched by dgemm is bounded by the asserts above and in `View::new`;
    // `c` is a unique borrow so it cannot alias `a` or `b`.
    unsafe {
        matrixmultiply::dgemm(
            m,
            k,
            n,
            1.0,
            a.data.as_ptr(),
            a.row_stride as isize,
            a.col_stride as isize,
            b.data.as_ptr(),
            b.row_stride as isize,
            b.col_stride as isize,
            beta,
            c.as_mut_ptr(),
            c_row_stride as isize,
            c_col_stride as isize,
        );
    }
}

#pragma once

#include <Eigen/Dense>

#include "cauchy_sketch/matrix.hpp"

namespace cauchy_sketch::detail {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ConstMatrixMap = Eigen::Map<const RowMatrix>;
using MatrixMap = Eigen::Map<RowMatrix>;
using ConstVectorMap = Eigen::Map<const Eigen::VectorXd>;

inline ConstMatrixMap view(const DenseMatrix& m) {
    return {m.data().data(), static_cast<Eigen::Index>(m.rows()),
            static_cast<Eigen::Index>(m.cols())};
}

inline MatrixMap view(DenseMatrix& m) {
    return {m.data().data(), static_cast<Eigen::Index>(m.rows()),
            static_cast<Eigen::Index>(m.cols())};
}

template <typename Derived>
DenseMatrix to_dense(const Eigen::MatrixBase<Derived>& e) {
    DenseMatrix out(static_cast<std::size_t>(e.rows()), static_cast<std::size_t>(e.cols()));
    view(out) = e;
    return out;
}

}  // namespace cauchy_sketch::detail

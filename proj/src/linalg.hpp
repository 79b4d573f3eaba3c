// SPDX-License-Identifier: Apache-2.0
//
// pilotmimo: multi-cell TDD pilot contamination and precoding simulator
// Copyright (C) 2026 The pilotmimo Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef PILOTMIMO_SRC_LINALG_HPP
#define PILOTMIMO_SRC_LINALG_HPP

#include "pilotmimo/errors.hpp"

#include <armadillo>
#include <string>

namespace pilotmimo::detail
{
    // Solves A X = B for Hermitian positive definite A through its Cholesky
    // factor. Only the upper triangle of A is read.
    inline arma::cx_mat hermitian_solve(const arma::cx_mat &A, const arma::cx_mat &B, const char *what)
    {
        arma::cx_mat R;
        if (!arma::chol(R, A))
            throw PreconditionViolated(std::string(what) + ": matrix is not Hermitian positive definite.");
        const arma::cx_mat Z = arma::solve(arma::trimatl(R.t()), B, arma::solve_opts::fast);
        return arma::solve(arma::trimatu(R), Z, arma::solve_opts::fast);
    }

    // D^{1/2} M for a real non-negative diagonal D given as a vector.
    inline arma::cx_mat scale_rows_sqrt(const arma::vec &d, const arma::cx_mat &M)
    {
        arma::cx_mat out = M;
        for (arma::uword k = 0; k < d.n_elem; ++k)
            out.row(k) *= std::sqrt(d(k));
        return out;
    }
}

#endif

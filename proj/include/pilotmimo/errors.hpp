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

#ifndef PILOTMIMO_ERRORS_HPP
#define PILOTMIMO_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace pilotmimo
{
    // Base of every error thrown by the library. The C API maps each subclass
    // onto one pm_status code.
    class Error : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    class InvalidConfig : public Error
    {
    public:
        using Error::Error;
    };

    class InvalidScenario : public Error
    {
    public:
        using Error::Error;
    };

    class ShapeMismatch : public Error
    {
    public:
        using Error::Error;
    };

    // Gram matrix of the estimated in-cell channel is numerically singular.
    class RankDeficient : public Error
    {
    public:
        using Error::Error;
    };

    class PreconditionViolated : public Error
    {
    public:
        using Error::Error;
    };

    class InvalidSpec : public Error
    {
    public:
        using Error::Error;
    };

    class IoError : public Error
    {
    public:
        using Error::Error;
    };
}

#endif

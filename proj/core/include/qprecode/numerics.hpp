// Copyright 2026 The qprecode Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

namespace qprecode {

/// Standard normal CDF.
double std_normal_cdf(double x);
/// Standard normal density.
double std_normal_pdf(double x);
/// Upper tail 1 - CDF, accurate for large x.
double std_normal_tail(double x);

}  // namespace qprecode

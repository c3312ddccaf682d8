/* Copyright 2026 The avredux Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef AVREDUX_STATS_HPP_
#define AVREDUX_STATS_HPP_

namespace avredux::stats {

// Regularized incomplete beta function I_x(a, b), evaluated by Lentz's
// continued fraction to a relative tolerance of 1e-10.
double RegularizedIncompleteBeta(double a, double b, double x);

// P(T > t) for Student's t with `df` degrees of freedom (df may be
// fractional).
double StudentTSurvival(double t, double df);

}  // namespace avredux::stats

#endif  // AVREDUX_STATS_HPP_

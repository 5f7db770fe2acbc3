// Copyright 2026 The sr360 Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SR360_SR360_HPP_
#define SR360_SR360_HPP_

#include "sr360/bench.hpp"
#include "sr360/erp_geometry.hpp"
#include "sr360/image.hpp"
#include "sr360/image_io.hpp"
#include "sr360/losses.hpp"
#include "sr360/metrics.hpp"
#include "sr360/resample.hpp"

#endif  // SR360_SR360_HPP_

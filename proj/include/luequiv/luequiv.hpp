// Copyright 2026 The luequiv Authors
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

#ifndef LUEQUIV_LUEQUIV_HPP
#define LUEQUIV_LUEQUIV_HPP

#include "luequiv/decompose.hpp"
#include "luequiv/density.hpp"
#include "luequiv/equivalence.hpp"
#include "luequiv/errors.hpp"
#include "luequiv/oracle.hpp"
#include "luequiv/random.hpp"
#include "luequiv/spectral.hpp"
#include "luequiv/tensor_core.hpp"

#endif  // LUEQUIV_LUEQUIV_HPP

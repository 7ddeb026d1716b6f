// Copyright 2026 The ACN Bounds Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ACNB_ACNB_HPP_
#define ACNB_ACNB_HPP_

#include "acnb/adversaries.hpp"
#include "acnb/atlas.hpp"
#include "acnb/bounds.hpp"
#include "acnb/error.hpp"
#include "acnb/game.hpp"
#include "acnb/model.hpp"
#include "acnb/notions.hpp"
#include "acnb/protocols.hpp"
#include "acnb/random.hpp"

#endif  // ACNB_ACNB_HPP_

// Copyright 2026 The sparsesim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include "sparsesim/basis_op.hpp"
#include "sparsesim/bitstring.hpp"
#include "sparsesim/circuit.hpp"
#include "sparsesim/circuit_io.hpp"
#include "sparsesim/ct_state.hpp"
#include "sparsesim/estimator.hpp"
#include "sparsesim/km_search.hpp"
#include "sparsesim/marginals.hpp"
#include "sparsesim/oracle.hpp"
#include "sparsesim/random.hpp"
#include "sparsesim/reconstruct.hpp"
#include "sparsesim/report.hpp"
#include "sparsesim/reversible.hpp"
#include "sparsesim/sparse.hpp"

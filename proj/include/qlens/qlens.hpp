#pragma once

#include "qlens/analysis.hpp"
#include "qlens/basis.hpp"
#include "qlens/bundle.hpp"
#include "qlens/circuit.hpp"
#include "qlens/circuit_io.hpp"
#include "qlens/dandelion.hpp"
#include "qlens/errors.hpp"
#include "qlens/examples.hpp"
#include "qlens/gate_matrix.hpp"
#include "qlens/json_io.hpp"
#include "qlens/statevec.hpp"
#include "qlens/store.hpp"
#include "qlens/svg.hpp"

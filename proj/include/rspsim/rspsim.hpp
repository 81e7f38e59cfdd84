#pragma once

// Umbrella header for the remote-state-preparation simulator.

#include "rspsim/channels.hpp"
#include "rspsim/complex_matrix.hpp"
#include "rspsim/hermitian_eig.hpp"
#include "rspsim/metrics.hpp"
#include "rspsim/protocol.hpp"
#include "rspsim/states.hpp"
#include "rspsim/sweep.hpp"
#include "rspsim/tomography.hpp"
#include "rspsim/waveplates.hpp"

// dephase.hpp: umbrella header

#pragma once

#include "dephase/check_suite.hpp"
#include "dephase/dephasing.hpp"
#include "dephase/errors.hpp"
#include "dephase/measures.hpp"
#include "dephase/model.hpp"
#include "dephase/oracle.hpp"
#include "dephase/photonic.hpp"
#include "dephase/qdmat.hpp"
#include "dephase/qrt.hpp"
#include "dephase/spectral.hpp"

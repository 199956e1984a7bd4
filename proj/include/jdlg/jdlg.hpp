#pragma once

#include "jdlg/catalog.hpp"
#include "jdlg/closure.hpp"
#include "jdlg/discrete_model.hpp"
#include "jdlg/errors.hpp"
#include "jdlg/finite_semigroup.hpp"
#include "jdlg/folner.hpp"
#include "jdlg/klawe.hpp"
#include "jdlg/linalg.hpp"
#include "jdlg/representation.hpp"
#include "jdlg/serialization.hpp"
#include "jdlg/split.hpp"
#include "jdlg/unitary.hpp"

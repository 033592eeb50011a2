# Copyright 2026 the ledgersim developers. Licensed under the Apache
# License, Version 2.0. See the COPYING file at the root of this
# distribution or at http://www.apache.org/licenses/LICENSE-2.0

"""Permissioned-ledger payments simulator with VAT split payments.

The heavy lifting lives in the C++ extension ``ledgersim._core``; this
package re-exports its public surface.
"""

from ledgersim._core import (
    LedgerError,
    Network,
    default_allowed_goods,
    default_vat_rates,
    net_amount,
    parse_shopping_list,
    run_bench,
    run_feasibility,
    sample_basket,
    total_amount,
    vat_amount,
)

__all__ = [
    "LedgerError",
    "Network",
    "default_allowed_goods",
    "default_vat_rates",
    "net_amount",
    "parse_shopping_list",
    "run_bench",
    "run_feasibility",
    "sample_basket",
    "total_amount",
    "vat_amount",
]

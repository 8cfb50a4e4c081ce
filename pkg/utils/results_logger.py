"""
Almacenamiento simple de resultados de simulación
Guarda el ledger de pasos (CSV) y un resumen de la corrida (JSON)
"""
import json
import logging
import os
from datetime import datetime
from typing import Any, Dict, List, Optional

import pandas as pd

from simulation.ledger import RunLedger

logger = logging.getLogger(__name__)


class ResultsLogger:
    """
    Guarda y recupera resultados de simulaciones
    """

    def __init__(self, results_dir: str = 'output'):
        """
        Args:
            results_dir: Directorio donde guardar resultados
        """
        self.results_dir = results_dir
        os.makedirs(results_dir, exist_ok=True)

    def write_ledger(self, ledger: RunLedger) -> str:
        """
        Escribe un registro por intento de paso (t, dt, NS, GMRES, éxito)

        Returns:
            Ruta del CSV
        """
        filepath = os.path.join(self.results_dir, f"{ledger.name}_ledger.csv")
        ledger.to_dataframe().to_csv(filepath, index=False)
        logger.info(f"Ledger written to {filepath}")
        return filepath

    def save_run(self, ledger: RunLedger, config: Optional[Dict[str, Any]] = None) -> str:
        """
        Guarda el resumen de una corrida

        Args:
            ledger: Ledger de la corrida
            config: Configuración usada (dict serializable)

        Returns:
            Ruta del JSON
        """
        filepath = os.path.join(self.results_dir, f"{ledger.name}_summary.json")
        data = {
            'timestamp': datetime.now().isoformat(),
            'summary': ledger.summary(),
            'config': config or {},
        }
        with open(filepath, 'w') as f:
            json.dump(data, f, indent=2, default=str)
        logger.info(f"Run summary written to {filepath}")
        return filepath

    def load_run(self, filename: str) -> Dict[str, Any]:
        """Carga el resumen de una corrida"""
        with open(os.path.join(self.results_dir, filename), 'r') as f:
            return json.load(f)

    def list_runs(self) -> List[str]:
        return sorted(f for f in os.listdir(self.results_dir) if f.endswith('_summary.json'))

    def create_summary_report(self) -> pd.DataFrame:
        """
        Tabla con los totales de todas las corridas guardadas
        """
        rows = [self.load_run(f)['summary'] for f in self.list_runs()]
        if not rows:
            return pd.DataFrame()
        return pd.DataFrame(rows)[['name', 'method', 'TS', 'NS', 'average_dt', 'wall_time', 'completed']]

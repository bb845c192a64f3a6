# Point d'entrée WSGI du service d'analyse (Gunicorn: wsgi:application)
import os
import sys

# Ajouter le répertoire du projet au path
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

try:
    from dotenv import load_dotenv
    load_dotenv()
except ImportError:
    pass

from crnldp import create_app  # noqa: E402

application = create_app()

if __name__ == "__main__":
    # Serveur de développement Flask
    application.run(host=os.environ.get('HOST', '127.0.0.1'),
                    port=int(os.environ.get('PORT', 5000)))

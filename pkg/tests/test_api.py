import pytest

from main import crear_app


@pytest.fixture
def cliente():
    app = crear_app()
    app.config['TESTING'] = True
    return app.test_client()


def test_health(cliente):
    assert cliente.get('/_health').get_json() == {'status': 'ok'}


def test_listar_ejemplos(cliente):
    respuesta = cliente.get('/api/ejemplos')
    assert respuesta.status_code == 200
    assert len(respuesta.get_json()['examples']) == 6


def test_emitir_ejemplo(cliente):
    datos = cliente.get('/api/ejemplos/ex3').get_json()
    assert datos['name'] == 'EX3'
    assert len(datos['projects']) == 2


def test_ejemplo_desconocido(cliente):
    respuesta = cliente.get('/api/ejemplos/nada')
    assert respuesta.status_code == 400
    assert respuesta.get_json()['error'] == 'ErrorConfiguracion'


def test_enumerate_coincide_con_la_cli(cliente):
    respuesta = cliente.post('/api/analisis/enumerate', json={'example': 'EX1'})
    assert respuesta.status_code == 200
    assert respuesta.get_json() == {'num_states': 35, 'num_maximal': 10, 'num_maximal_classes': 3,
                                    'max_projects': 4}


def test_modelo_en_el_cuerpo(cliente):
    modelo = cliente.get('/api/ejemplos/MAR').get_json()
    respuesta = cliente.post('/api/analisis/enumerate', json={'model': modelo})
    assert respuesta.get_json()['num_states'] == 24


def test_stability_cs_con_costo(cliente):
    respuesta = cliente.post('/api/analisis/stability',
                             json={'example': 'EX1-JK', 'notion': 'cs', 'cost': '1/4'})
    datos = respuesta.get_json()
    assert respuesta.status_code == 200
    assert datos['cost'] == {'num': 1, 'den': 4}


def test_falta_la_fuente(cliente):
    respuesta = cliente.post('/api/analisis/enumerate', json={})
    assert respuesta.status_code == 400


def test_esquema_invalido(cliente):
    modelo = cliente.get('/api/ejemplos/EX3').get_json()
    modelo['sorpresa'] = True
    respuesta = cliente.post('/api/analisis/enumerate', json={'model': modelo})
    assert respuesta.status_code == 400
    assert 'sorpresa' in respuesta.get_json()['message']


def test_capacidad_excedida(cliente):
    respuesta = cliente.post('/api/analisis/stability',
                             json={'example': 'EX1', 'notion': 'farsighted', 'mode': 'exhaustive'})
    assert respuesta.status_code == 413


def test_precondicion(cliente):
    respuesta = cliente.post('/api/analisis/stationary',
                             json={'example': 'EX1', 'epsilon': 0.1, 'scheme': 'uniform'})
    assert respuesta.status_code == 422
    assert respuesta.get_json()['error'] == 'ErrorPrecondicion'


def test_parametro_invalido(cliente):
    respuesta = cliente.post('/api/analisis/simulate', json={'example': 'EX1', 'epsilon': 0.1, 'steps': 'diez'})
    assert respuesta.status_code == 400


def test_comando_desconocido(cliente):
    assert cliente.post('/api/analisis/bailar', json={'example': 'EX1'}).status_code == 404


def test_metodo_no_permitido(cliente):
    assert cliente.get('/api/analisis/enumerate').status_code == 405
